#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "singcert/types.hpp"

namespace singcert {

// Derive an independent stream seed from (seed, tag). splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded generator for complex standard Gaussians. One instance per call site;
// never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double gaussian() { return normal_(eng_); }

  Complex cgaussian() {
    double re = normal_(eng_);
    double im = normal_(eng_);
    return {re, im};
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  Eigen::MatrixXcd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cgaussian();
    return m;
  }

  Eigen::VectorXcd gaussian_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  Eigen::VectorXcd unit_vector(int n) {
    Eigen::VectorXcd v = gaussian_vector(n);
    double nrm = v.norm();
    while (nrm == 0.0) {
      v = gaussian_vector(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Haar-like random unitary: QR of a complex Gaussian with the phases of
// diag(R) absorbed so the result is deterministic in the seed.
Eigen::MatrixXcd random_unitary(int n, Rng& rng);

}  // namespace singcert
