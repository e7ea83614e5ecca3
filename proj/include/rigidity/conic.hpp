#pragma once

#include <optional>
#include <vector>

#include "rigidity/framework.hpp"

namespace rigidity {

namespace detail {

/// Dimension of the space of symmetric d x d matrices.
inline int sym_coord_dim(int d) { return d * (d + 1) / 2; }

/// Coordinates of a symmetric matrix with off-diagonal entries scaled by
/// sqrt(2), so the Euclidean inner product of coordinate vectors equals the
/// Frobenius inner product of the matrices.
inline Vector sym_to_coords(const Matrix& s) {
  const int d = static_cast<int>(s.rows());
  Vector v(sym_coord_dim(d));
  int k = 0;
  const double r2 = std::sqrt(2.0);
  for (int a = 0; a < d; ++a) {
    v(k++) = s(a, a);
    for (int b = a + 1; b < d; ++b) v(k++) = r2 * s(a, b);
  }
  return v;
}

inline Matrix coords_to_sym(const Vector& v, int d) {
  Matrix s(d, d);
  int k = 0;
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < d; ++a) {
    s(a, a) = v(k++);
    for (int b = a + 1; b < d; ++b) {
      s(a, b) = inv_r2 * v(k);
      s(b, a) = inv_r2 * v(k);
      ++k;
    }
  }
  return s;
}

/// Row of coefficients c such that c . sym_to_coords(S) = x^T S y for every
/// symmetric S.
inline Eigen::RowVectorXd pairing_row(const Vector& x, const Vector& y) {
  const int d = static_cast<int>(x.size());
  Eigen::RowVectorXd row(sym_coord_dim(d));
  int k = 0;
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < d; ++a) {
    row(k++) = x(a) * y(a);
    for (int b = a + 1; b < d; ++b)
      row(k++) = inv_r2 * (x(a) * y(b) + x(b) * y(a));
  }
  return row;
}

/// Scale to unit Frobenius norm and fix the overall sign so the first
/// non-negligible entry in row-major order is positive.
inline Matrix normalize_form(Matrix m) {
  const double norm = m.norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("normalize_form: zero matrix");
  m /= norm;
  const double maxabs = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > 1e-12 * maxabs) {
        if (m(i, j) < 0) m = -m;
        return m;
      }
  return m;
}

/// Solutions S (symmetric, d x d) of a homogeneous system of pairing
/// constraints x_r^T S y_r = 0; returns a Frobenius-orthonormal basis.
inline std::vector<Matrix> symmetric_solution_space(
    const std::vector<std::pair<Vector, Vector>>& pairs, int d,
    const Tolerance& tol) {
  Matrix rows(pairs.size(), sym_coord_dim(d));
  for (size_t r = 0; r < pairs.size(); ++r)
    rows.row(static_cast<Eigen::Index>(r)) =
        pairing_row(pairs[r].first, pairs[r].second);
  const RankNullspace ns = rank_nullspace(rows, tol);
  std::vector<Matrix> out;
  out.reserve(ns.nullspace.cols());
  for (Eigen::Index k = 0; k < ns.nullspace.cols(); ++k)
    out.push_back(normalize_form(coords_to_sym(ns.nullspace.col(k), d)));
  return out;
}

}  // namespace detail

/// Nonzero symmetric d x d form, normalized to unit Frobenius norm with a
/// deterministic sign.  Encodes a quadric "at infinity": the directions e
/// with e^T Q e = 0.
struct ConicForm {
  Matrix form;

  explicit ConicForm(const Matrix& m, const Tolerance& tol = {})
      : form(detail::normalize_form(symmetrized(m))) {
    tol.validate();
    require_finite(m, "ConicForm");
  }

  int dim() const { return static_cast<int>(form.rows()); }
  double value(const Vector& x) const { return x.dot(form * x); }
};

/// Projective quadric in E^d, stored as a normalized symmetric (d+1) x (d+1)
/// form acting on homogeneous coordinates (x, 1).  The top-left d x d block
/// is the quadratic part, the last column twice the linear part, the corner
/// the constant.
struct HomogeneousQuadric {
  Matrix form;

  explicit HomogeneousQuadric(const Matrix& m, const Tolerance& tol = {})
      : form(detail::normalize_form(symmetrized(m))) {
    tol.validate();
    require_finite(m, "HomogeneousQuadric");
    if (form.rows() < 2)
      throw std::invalid_argument("HomogeneousQuadric: need ambient dimension >= 1");
  }

  /// Build from affine data: x^T q x + l . x + c = 0.
  static HomogeneousQuadric from_affine(const Matrix& q, const Vector& l, double c,
                                        const Tolerance& tol = {}) {
    const int d = static_cast<int>(q.rows());
    if (q.cols() != d || l.size() != d)
      throw std::invalid_argument("HomogeneousQuadric: inconsistent affine data");
    Matrix m(d + 1, d + 1);
    m.topLeftCorner(d, d) = symmetrized(q);
    m.topRightCorner(d, 1) = 0.5 * l;
    m.bottomLeftCorner(1, d) = 0.5 * l.transpose();
    m(d, d) = c;
    return HomogeneousQuadric(m, tol);
  }

  int ambient_dim() const { return static_cast<int>(form.rows()) - 1; }
  Matrix quadratic_block() const {
    const int d = ambient_dim();
    return form.topLeftCorner(d, d);
  }

  Vector homogenize(const Vector& x) const {
    if (x.size() != ambient_dim())
      throw std::invalid_argument("HomogeneousQuadric: point dimension mismatch");
    Vector xh(x.size() + 1);
    xh << x, 1.0;
    return xh;
  }

  /// Value of the affine quadric at x.
  double value(const Vector& x) const {
    const Vector xh = homogenize(x);
    return xh.dot(form * xh);
  }
};

/// Symmetric forms that vanish on every given direction (one per row):
/// a Frobenius-orthonormal basis of { Q : v^T Q v = 0 for all rows v }.
inline std::vector<ConicForm> isotropic_form_space(const Matrix& directions,
                                                   const Tolerance& tol = {}) {
  tol.validate();
  require_finite(directions, "isotropic_form_space");
  if (directions.rows() < 1 || directions.cols() < 1)
    throw std::invalid_argument("isotropic_form_space: empty direction set");
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(directions.rows());
  for (Eigen::Index e = 0; e < directions.rows(); ++e) {
    const Vector dvec = directions.row(e).transpose();
    pairs.emplace_back(dvec, dvec);
  }
  std::vector<ConicForm> out;
  for (const Matrix& s : detail::symmetric_solution_space(
           pairs, static_cast<int>(directions.cols()), tol))
    out.emplace_back(s, tol);
  return out;
}

/// All conics at infinity of a framework: nonzero symmetric forms Q with
/// e^T Q e = 0 for every edge vector e.  Returned as a Frobenius-orthonormal
/// basis of the solution space (empty when only the zero form works).
inline std::vector<ConicForm> conic_space(const Framework& f, const Tolerance& tol = {}) {
  return isotropic_form_space(edge_vectors(f), tol);
}

namespace detail {

/// Solution space of the vertex/edge incidence system for homogeneous rows:
///   r_i^T S r_i = 0 for every row, r_i^T S r_j = 0 for every edge (i, j).
inline std::vector<Matrix> incidence_solution_space(const Matrix& rows,
                                                    const std::vector<Edge>& edges,
                                                    const Tolerance& tol) {
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(rows.rows() + edges.size());
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    pairs.emplace_back(rows.row(i).transpose(), rows.row(i).transpose());
  for (const Edge& e : edges)
    pairs.emplace_back(rows.row(e.first).transpose(),
                       rows.row(e.second).transpose());
  return symmetric_solution_space(pairs, static_cast<int>(rows.cols()), tol);
}

}  // namespace detail

/// All quadrics that contain every vertex and every edge segment of the
/// framework.  A segment lies on a quadric exactly when both endpoints do and
/// the bilinear cross term vanishes, which is what the returned system
/// encodes.  Basis of the solution space; empty when the framework is unruled.
inline std::vector<HomogeneousQuadric> ruling_quadric_space(const Framework& f,
                                                            const Tolerance& tol = {}) {
  tol.validate();
  const int n = f.vertex_count();
  Matrix rows(n, f.dim() + 1);
  rows.leftCols(f.dim()) = f.config.points();
  rows.col(f.dim()).setOnes();
  std::vector<HomogeneousQuadric> out;
  for (const Matrix& s :
       detail::incidence_solution_space(rows, f.graph.edges(), tol))
    out.emplace_back(s, tol);
  return out;
}

/// A framework is ruled when one quadric contains all of its vertices and
/// edges.
inline bool is_ruled(const Framework& f, const Tolerance& tol = {}) {
  return !ruling_quadric_space(f, tol).empty();
}

/// Affine subspace written as base point plus orthonormal direction columns.
struct AffineSubspace {
  Vector base_point;
  Matrix directions;

  int dimension() const { return static_cast<int>(directions.cols()); }
};

/// Location of the singular (cone) points of a quadric.
enum class ConePointSet {
  empty,            ///< smooth quadric
  affine_subspace,  ///< cone points form an affine subspace of E^d
  at_infinity,      ///< singular directions only, no affine cone point
};

struct QuadricClassification {
  int rank = 0;
  SignatureTriple signature;
  bool is_smooth = false;
  /// False when the form is definite or semidefinite, in which case the
  /// quadric cannot have full affine span.
  bool spans_ambient = false;
  ConePointSet cone_points = ConePointSet::empty;
  std::optional<AffineSubspace> cone_point_space;
};

/// Rank/signature classification of a quadric together with its singular
/// locus.  Cone points are the projective kernel of the form; when the kernel
/// meets the affine chart the cone points form an affine subspace of
/// dimension (kernel dimension - 1).
inline QuadricClassification classify_quadric(const HomogeneousQuadric& q,
                                              const Tolerance& tol = {}) {
  tol.validate();
  const int d = q.ambient_dim();
  QuadricClassification out;
  out.signature = eigen_signature(q.form, tol);
  out.rank = out.signature.rank();
  out.is_smooth = out.rank == d + 1;
  out.spans_ambient = out.signature.negatives > 0 && out.signature.positives > 0;

  const RankNullspace ns = rank_nullspace(q.form, tol);
  if (ns.nullspace.cols() == 0) {
    out.cone_points = ConePointSet::empty;
    return out;
  }

  // Kernel combinations with nonzero last coordinate are affine cone points.
  const Eigen::RowVectorXd last = ns.nullspace.row(d);
  if (last.norm() <= tol.cutoff(1.0)) {
    out.cone_points = ConePointSet::at_infinity;
    return out;
  }

  out.cone_points = ConePointSet::affine_subspace;
  AffineSubspace space;
  Vector rep = ns.nullspace * last.transpose();
  rep /= rep(d);
  space.base_point = rep.head(d);
  // Directions: kernel combinations with zero last coordinate.
  const RankNullspace in_last = rank_nullspace(last, tol);
  const Matrix dirs = ns.nullspace * in_last.nullspace;
  space.directions = dirs.topRows(d);
  out.cone_point_space = std::move(space);
  return out;
}

/// Whether x is a singular point of the quadric.  The point must lie on the
/// quadric, otherwise the question is ill-posed and an error is raised.
inline bool is_cone_point(const HomogeneousQuadric& q, const Vector& x,
                          const Tolerance& tol = {}) {
  tol.validate();
  require_finite(x, "is_cone_point");
  const Vector xh = q.homogenize(x);
  const double scale = q.form.norm() * xh.squaredNorm();
  if (std::abs(xh.dot(q.form * xh)) > tol.cutoff(scale))
    throw std::invalid_argument("is_cone_point: point does not lie on the quadric");
  const double grad = (q.form * xh).norm();
  return grad <= tol.cutoff(q.form.norm() * xh.norm());
}

/// Whether the whole line through two distinct points lies on the quadric.
/// True exactly when both points lie on it and the bilinear cross term
/// vanishes.
inline bool line_on_quadric(const HomogeneousQuadric& q, const Vector& x1,
                            const Vector& x2, const Tolerance& tol = {}) {
  tol.validate();
  require_finite(x1, "line_on_quadric");
  require_finite(x2, "line_on_quadric");
  if ((x1 - x2).norm() <= tol.cutoff(std::max(x1.norm(), x2.norm())))
    throw std::invalid_argument("line_on_quadric: points must be distinct");
  const Vector a = q.homogenize(x1);
  const Vector b = q.homogenize(x2);
  const double scale =
      q.form.norm() * std::max(a.squaredNorm(), b.squaredNorm());
  return std::abs(a.dot(q.form * a)) <= tol.cutoff(scale) &&
         std::abs(b.dot(q.form * b)) <= tol.cutoff(scale) &&
         std::abs(a.dot(q.form * b)) <= tol.cutoff(scale);
}

/// The conic at infinity of a quadric: its quadratic part, when nonzero.
/// Quadrics with (numerically) zero quadratic part -- degenerate hyperplane
/// pairs -- have no conic and yield an empty result.
inline std::optional<ConicForm> conic_restriction(const HomogeneousQuadric& q,
                                                  const Tolerance& tol = {}) {
  tol.validate();
  const Matrix block = q.quadratic_block();
  if (block.norm() <= tol.cutoff(q.form.norm())) return std::nullopt;
  return ConicForm(block, tol);
}

}  // namespace rigidity
