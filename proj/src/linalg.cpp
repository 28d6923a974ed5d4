#include "singcert/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include "singcert/rng.hpp"

namespace singcert {

SvdResult svd(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) {
    SvdResult r;
    r.U = CMatrix::Identity(A.rows(), A.rows());
    r.V = CMatrix::Identity(A.cols(), A.cols());
    r.sigma = Eigen::VectorXd::Zero(0);
    return r;
  }
  Eigen::JacobiSVD<CMatrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult r;
  r.U = dec.matrixU();
  r.V = dec.matrixV();
  r.sigma = dec.singularValues();
  return r;
}

double op_norm(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(A).singularValues()(0);
}

namespace {

// sigma_min <= 1e-14 sigma_max counts as singular for solve/inv_norm.
constexpr double kSolveRelTol = 1e-14;

}  // namespace

double inv_norm(const CMatrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw DimensionError("inv_norm requires a nonempty square matrix");
  Eigen::VectorXd s = Eigen::JacobiSVD<CMatrix>(A).singularValues();
  double smin = s(s.size() - 1);
  if (smin <= kSolveRelTol * s(0) || smin == 0.0)
    throw SingularMatrixError("matrix is numerically singular");
  return 1.0 / smin;
}

CVector solve(const CMatrix& A, const CVector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw DimensionError("solve dimension mismatch");
  Eigen::JacobiSVD<CMatrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = dec.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= kSolveRelTol * s(0) || s(s.size() - 1) == 0.0)
    throw SingularMatrixError("matrix is numerically singular");
  return dec.solve(b);
}

double least_squares_residual(const CMatrix& A, const CVector& b) {
  if (A.rows() != b.size()) throw DimensionError("least_squares_residual dimension mismatch");
  if (A.cols() == 0) return b.norm();
  Eigen::JacobiSVD<CMatrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = dec.singularValues();
  double cut = s.size() ? kSolveRelTol * s(0) : 0.0;
  CVector proj = CVector::Zero(b.size());
  for (int j = 0; j < s.size(); ++j) {
    if (s(j) <= cut) break;
    CVector u = dec.matrixU().col(j);
    proj += u * (u.adjoint() * b);
  }
  return (b - proj).norm();
}

double rank_threshold(double sigma_max, double tol) {
  return sigma_max <= tol ? tol : tol * sigma_max;
}

int rank_from_sigma(const Eigen::VectorXd& sigma, double tol) {
  if (sigma.size() == 0) return 0;
  double thr = rank_threshold(sigma(0), tol);
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > thr) ++rank;
  return rank;
}

int numerical_rank(const CMatrix& A, double tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  return rank_from_sigma(Eigen::JacobiSVD<CMatrix>(A).singularValues(), tol);
}

int numerical_nullity(const CMatrix& A, double tol) {
  return static_cast<int>(A.cols()) - numerical_rank(A, tol);
}

KernelFrame numerical_kernel(const CMatrix& A, double tol) {
  if (A.rows() != A.cols()) throw DimensionError("numerical_kernel requires a square matrix");
  const int n = static_cast<int>(A.rows());
  SvdResult dec = svd(A);
  int rank = rank_from_sigma(dec.sigma, tol);
  KernelFrame frame;
  frame.kappa = n - rank;
  frame.sigma = dec.sigma;
  frame.tol_used = n ? rank_threshold(dec.sigma(0), tol) : tol;
  frame.V2 = dec.V.leftCols(rank);
  frame.V1 = dec.V.rightCols(n - rank);
  return frame;
}

KernelFrame random_orthonormal_kernel_basis(const KernelFrame& frame, std::uint64_t seed) {
  if (frame.kappa < 1) return frame;
  Rng rng(mix_seed(seed, 0x6672616d65ull));  // "frame"
  KernelFrame out = frame;
  out.V1 = frame.V1 * random_unitary(frame.kappa, rng);
  return out;
}

}  // namespace singcert
