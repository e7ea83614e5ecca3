#pragma once

#include <optional>
#include <vector>

#include "rigidity/conic.hpp"
#include "rigidity/framework.hpp"

namespace rigidity {

/// Affine map x -> A x + t on E^d.
struct AffineMap {
  Matrix linear;
  Vector translation;

  AffineMap(Matrix a, Vector t)
      : linear(std::move(a)), translation(std::move(t)) {
    if (linear.rows() != linear.cols() || linear.rows() != translation.size())
      throw std::invalid_argument("AffineMap: inconsistent dimensions");
    require_finite(linear, "AffineMap");
    require_finite(translation, "AffineMap");
  }

  static AffineMap identity(int d) {
    return AffineMap(Matrix::Identity(d, d), Vector::Zero(d));
  }

  int dim() const { return static_cast<int>(linear.rows()); }
  Vector apply(const Vector& x) const { return linear * x + translation; }

  /// Apply to a configuration-style matrix with one point per row.
  Matrix apply_points(const Matrix& points) const {
    return (points * linear.transpose()).rowwise() + translation.transpose();
  }
};

/// Quadratic bump map x -> x + (x^T Q x) v with a nonzero symmetric form Q
/// and direction v.  Fixes exactly the points of the quadric x^T Q x = 0.
struct PerturbationMap {
  Matrix quadratic_form;
  Vector direction;

  PerturbationMap(const Matrix& q, Vector v)
      : quadratic_form(symmetrized(q)), direction(std::move(v)) {
    require_finite(quadratic_form, "PerturbationMap");
    require_finite(direction, "PerturbationMap");
    if (quadratic_form.rows() != direction.size())
      throw std::invalid_argument("PerturbationMap: dimension mismatch");
    if (!(quadratic_form.norm() > 0.0))
      throw std::invalid_argument("PerturbationMap: zero quadratic form");
    if (!(direction.norm() > 0.0))
      throw std::invalid_argument("PerturbationMap: zero direction");
  }

  PerturbationMap(const ConicForm& q, Vector v)
      : PerturbationMap(q.form, std::move(v)) {}

  int dim() const { return static_cast<int>(direction.size()); }
  Vector apply(const Vector& x) const {
    return x + x.dot(quadratic_form * x) * direction;
  }
};

/// Image of a configuration under a perturbation map.  The image must still
/// affinely span the ambient space (the Configuration constructor enforces
/// this).
inline Configuration apply_perturbation(const PerturbationMap& map,
                                        const Configuration& config,
                                        const Tolerance& tol = {}) {
  if (map.dim() != config.dim())
    throw std::invalid_argument("apply_perturbation: dimension mismatch");
  Matrix out(config.count(), config.dim());
  for (int i = 0; i < config.count(); ++i)
    out.row(i) = map.apply(config.point(i)).transpose();
  return Configuration(std::move(out), tol);
}

struct AffineFit {
  AffineMap map;
  /// Frobenius norm of the pointwise error of the best fit.
  double residual = 0.0;
};

/// Least-squares affine map sending the rows of p to the rows of q.
inline AffineFit fit_affine(const Matrix& p, const Matrix& q) {
  require_finite(p, "fit_affine");
  require_finite(q, "fit_affine");
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw std::invalid_argument("fit_affine: point sets must match in shape");
  if (p.rows() < 1) throw std::invalid_argument("fit_affine: empty point sets");

  const int d = static_cast<int>(p.cols());
  Matrix design(p.rows(), d + 1);
  design.leftCols(d) = p;
  design.col(d).setOnes();
  const Matrix coeffs =
      design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(q);
  AffineFit fit{AffineMap(coeffs.topRows(d).transpose(), coeffs.row(d).transpose()),
                (design * coeffs - q).norm()};
  return fit;
}

/// Whether q is (up to tolerance) an affine image of p.
inline bool is_affine_precongruent(const Matrix& p, const Matrix& q,
                                   const Tolerance& tol = {}) {
  tol.validate();
  return fit_affine(p, q).residual <= tol.cutoff(1.0 + q.norm());
}

/// Whether each closed vertex neighborhood of the framework maps to the
/// corresponding rows of q by some affine map (a different map per vertex is
/// allowed, and the maps may be singular).
inline bool is_neighborhood_preequivalent(const Framework& f, const Matrix& q,
                                          const Tolerance& tol = {}) {
  tol.validate();
  require_finite(q, "is_neighborhood_preequivalent");
  if (q.rows() != f.vertex_count() || q.cols() != f.dim())
    throw std::invalid_argument("is_neighborhood_preequivalent: shape mismatch");
  for (int v = 0; v < f.vertex_count(); ++v) {
    const std::vector<int> nbhd = f.graph.inclusive_neighborhood(v);
    Matrix sub_p(nbhd.size(), f.dim());
    Matrix sub_q(nbhd.size(), f.dim());
    for (size_t r = 0; r < nbhd.size(); ++r) {
      sub_p.row(static_cast<Eigen::Index>(r)) = f.config.points().row(nbhd[r]);
      sub_q.row(static_cast<Eigen::Index>(r)) = q.row(nbhd[r]);
    }
    if (fit_affine(sub_p, sub_q).residual > tol.cutoff(1.0 + sub_q.norm()))
      return false;
  }
  return true;
}

/// Orthonormal basis (columns) of the space of column vectors z such that,
/// restricted to every closed vertex neighborhood, z is an affine function of
/// the vertex positions.  Always contains the coordinate columns and the
/// all-ones vector, so the dimension is at least d + 1.
inline Matrix neighborhood_affine_space(const Framework& f, const Tolerance& tol = {}) {
  tol.validate();
  const int n = f.vertex_count();
  const int d = f.dim();

  std::vector<Matrix> blocks;
  std::vector<std::vector<int>> scatter;
  Eigen::Index total_rows = 0;
  for (int v = 0; v < n; ++v) {
    const std::vector<int> nbhd = f.graph.inclusive_neighborhood(v);
    const Eigen::Index k = static_cast<Eigen::Index>(nbhd.size());
    Matrix design(k, d + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      design.row(r).head(d) = f.config.points().row(nbhd[static_cast<size_t>(r)]);
      design(r, d) = 1.0;
    }
    // Residual projector: rows demand that z|nbhd lies in the column space
    // of the local affine design matrix.
    Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    const double threshold = tol.cutoff(sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > threshold) ++rank;
    const Matrix u = svd.matrixU().leftCols(rank);
    blocks.push_back(Matrix::Identity(k, k) - u * u.transpose());
    scatter.push_back(nbhd);
    total_rows += k;
  }

  Matrix constraints = Matrix::Zero(total_rows, n);
  Eigen::Index row = 0;
  for (size_t v = 0; v < blocks.size(); ++v) {
    const Matrix& block = blocks[v];
    for (Eigen::Index r = 0; r < block.rows(); ++r, ++row)
      for (Eigen::Index c = 0; c < block.cols(); ++c)
        constraints(row, scatter[v][static_cast<size_t>(c)]) = block(r, c);
  }
  return rank_nullspace(constraints, tol).nullspace;
}

/// A framework is neighborhood affine rigid when the neighborhood affine
/// space is as small as it can be: exactly the affine functions of the
/// positions, of dimension d + 1.
inline bool is_neighborhood_affine_rigid(const Framework& f, const Tolerance& tol = {}) {
  return neighborhood_affine_space(f, tol).cols() == f.dim() + 1;
}

/// One-parameter family of affine maps A(t) = sqrt(I + t Q) associated with a
/// conic form.  A(0) is the identity; the map exists only while I + t Q stays
/// positive definite.  Frameworks whose edge directions all satisfy
/// e^T Q e = 0 keep every edge length under A(t).
inline AffineMap affine_flex_path(const ConicForm& q, double t,
                                  const Tolerance& tol = {}) {
  tol.validate();
  if (!std::isfinite(t)) throw std::invalid_argument("affine_flex_path: non-finite t");
  const int d = q.dim();
  const Matrix m = Matrix::Identity(d, d) + t * q.form;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("affine_flex_path: eigenvalue iteration failed");
  if (eig.eigenvalues().minCoeff() <= tol.absolute_floor)
    throw std::invalid_argument(
        "affine_flex_path: I + t Q is not positive definite at this t");
  const Vector roots = eig.eigenvalues().cwiseSqrt();
  return AffineMap(symmetrized(eig.eigenvectors() * roots.asDiagonal() *
                               eig.eigenvectors().transpose()),
                   Vector::Zero(d));
}

/// Whether the affine map is a rigid motion (orthogonal linear part).
inline bool is_euclidean(const AffineMap& a, const Tolerance& tol = {}) {
  tol.validate();
  const Matrix gram = a.linear.transpose() * a.linear;
  const int d = a.dim();
  return (gram - Matrix::Identity(d, d)).norm() <= tol.cutoff(1.0 + gram.norm());
}

}  // namespace rigidity
