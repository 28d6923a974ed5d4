#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace singcert {

using Complex = std::complex<double>;

// Parse failure with 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The certification operator (A or A-H) is numerically rank-deficient.
class SingularOperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotStabilizedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MacaulaySizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// OutOfBall / RadiusOutOfRange preconditions of the ball-based checks.
class RadiusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace singcert
