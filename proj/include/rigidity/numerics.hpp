#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rigidity {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Shared numerical-rank policy.  Every rank, signature and residual decision
/// in the library is made through one Tolerance object so that verdicts stay
/// reproducible and adjustable in a single place.
struct Tolerance {
  /// Cutoff relative to the dominant singular value (or spectral radius).
  double relative_cutoff = 1e-9;
  /// Lower bound for any cutoff; guards near-zero inputs.
  double absolute_floor = 1e-12;

  void validate() const {
    if (!(relative_cutoff > 0.0) || !(relative_cutoff < 1.0) || !(absolute_floor > 0.0))
      throw std::invalid_argument(
          "Tolerance: need 0 < relative_cutoff < 1 and absolute_floor > 0");
  }

  /// Threshold for magnitudes measured against a problem-dependent scale.
  double cutoff(double scale) const {
    return std::max(relative_cutoff * scale, absolute_floor);
  }
};

/// Counts of negative, (numerically) zero and positive eigenvalues of a
/// symmetric matrix.
struct SignatureTriple {
  int negatives = 0;
  int zeros = 0;
  int positives = 0;

  int rank() const { return negatives + positives; }
  bool operator==(const SignatureTriple&) const = default;
};

inline void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

inline void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

/// Average a square matrix with its transpose, removing roundoff drift.
inline Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("symmetrized: matrix must be square");
  return 0.5 * (m + m.transpose());
}

struct RankNullspace {
  int rank = 0;
  /// Orthonormal columns spanning the (right) nullspace.
  Matrix nullspace;
};

/// Numerical rank and orthonormal nullspace basis of an arbitrary matrix.
/// A singular value counts toward the rank when it exceeds
/// max(relative_cutoff * sigma_max, absolute_floor).
inline RankNullspace rank_nullspace(const Matrix& m, const Tolerance& tol = {}) {
  tol.validate();
  require_finite(m, "rank_nullspace");
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) return {0, Matrix::Identity(cols, cols)};

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double threshold = tol.cutoff(sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;

  RankNullspace out;
  out.rank = rank;
  out.nullspace = svd.matrixV().rightCols(cols - rank);
  return out;
}

/// Eigenvalue sign counts of a symmetric matrix.  Eigenvalues within
/// max(relative_cutoff * spectral_radius, absolute_floor) of zero count as
/// zero.  The input is symmetrized by averaging first.
inline SignatureTriple eigen_signature(const Matrix& m, const Tolerance& tol = {}) {
  tol.validate();
  require_finite(m, "eigen_signature");
  const Matrix s = symmetrized(m);
  if (s.rows() == 0) return {};

  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigen_signature: eigenvalue iteration failed");
  const Vector& ev = eig.eigenvalues();
  const double cut = tol.cutoff(ev.cwiseAbs().maxCoeff());

  SignatureTriple sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -cut)
      ++sig.negatives;
    else if (ev(i) > cut)
      ++sig.positives;
    else
      ++sig.zeros;
  }
  return sig;
}

/// Nearest (Frobenius) positive semidefinite matrix: eigendecompose and clamp
/// negative eigenvalues to zero.
inline Matrix psd_project(const Matrix& m) {
  require_finite(m, "psd_project");
  const Matrix s = symmetrized(m);
  if (s.rows() == 0) return s;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigenvalue iteration failed");
  const Vector clamped = eig.eigenvalues().cwiseMax(0.0);
  return symmetrized(eig.eigenvectors() * clamped.asDiagonal() *
                     eig.eigenvectors().transpose());
}

/// Symmetric square root of a positive semidefinite matrix.  Eigenvalues that
/// are negative beyond the tolerance raise an error; small negative roundoff
/// is clamped to zero.
inline Matrix sqrt_psd(const Matrix& m, const Tolerance& tol = {}) {
  tol.validate();
  require_finite(m, "sqrt_psd");
  const Matrix s = symmetrized(m);
  if (s.rows() == 0) return s;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("sqrt_psd: eigenvalue iteration failed");
  const Vector& ev = eig.eigenvalues();
  const double cut = tol.cutoff(ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -cut)
    throw std::invalid_argument("sqrt_psd: matrix is not positive semidefinite");
  const Vector roots = ev.cwiseMax(0.0).cwiseSqrt();
  return symmetrized(eig.eigenvectors() * roots.asDiagonal() *
                     eig.eigenvectors().transpose());
}

}  // namespace rigidity
