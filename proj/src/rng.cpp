#include "singcert/rng.hpp"

#include <Eigen/QR>

namespace singcert {

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  if (n == 0) return Eigen::MatrixXcd(0, 0);
  Eigen::MatrixXcd G = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd R = Q.adjoint() * G;
  for (int j = 0; j < n; ++j) {
    Complex d = R(j, j);
    double mag = std::abs(d);
    Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    Q.col(j) *= phase;  // makes diag(R) positive; Q deterministic in the seed
  }
  return Q;
}

}  // namespace singcert
