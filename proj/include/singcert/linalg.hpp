#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "singcert/poly.hpp"
#include "singcert/types.hpp"

namespace singcert {

struct SvdResult {
  CMatrix U;
  Eigen::VectorXd sigma;  // descending, non-negative
  CMatrix V;              // A = U * diag(sigma) * V^H
};

SvdResult svd(const CMatrix& A);

double op_norm(const CMatrix& A);   // sigma_max (0 for an empty matrix)
double inv_norm(const CMatrix& A);  // 1/sigma_min; SingularMatrixError when rank-deficient

CVector solve(const CMatrix& A, const CVector& b);

// ||b - A A^+ b|| with the pseudoinverse truncated at 1e-14 relative rank.
double least_squares_residual(const CMatrix& A, const CVector& b);

// Shared numerical-rank policy. tol in (0,1) is relative to sigma_max; a
// matrix whose sigma_max does not exceed tol itself counts as numerically
// zero and the threshold stays absolute (rank 0).
double rank_threshold(double sigma_max, double tol);
int rank_from_sigma(const Eigen::VectorXd& sigma, double tol);
int numerical_rank(const CMatrix& A, double tol);
int numerical_nullity(const CMatrix& A, double tol);

// kappa smallest right-singular directions of a square matrix (V1) plus the
// orthogonal complement (V2); together [V2 V1] is unitary.
struct KernelFrame {
  int kappa = 0;
  CMatrix V1;  // n x kappa
  CMatrix V2;  // n x (n - kappa)
  Eigen::VectorXd sigma;
  double tol_used = 0.0;

  int n() const { return static_cast<int>(V1.rows()); }
};

KernelFrame numerical_kernel(const CMatrix& A, double tol);

// Replaces V1 by V1 Q with a seeded Haar-like random kappa x kappa unitary Q.
KernelFrame random_orthonormal_kernel_basis(const KernelFrame& frame, std::uint64_t seed);

}  // namespace singcert
