#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rigidity/framework.hpp"

namespace rigidity {

/// Framework with a distinguished apex vertex (index 0 by convention) that is
/// adjacent to every other vertex.
struct ConeFramework {
  static constexpr int apex_index = 0;

  Framework framework;

  explicit ConeFramework(Framework f) : framework(std::move(f)) {
    const int n = framework.vertex_count();
    if (static_cast<int>(framework.graph.neighbors(apex_index).size()) != n - 1)
      throw std::invalid_argument(
          "ConeFramework: apex must be adjacent to every other vertex");
  }

  int base_count() const { return framework.vertex_count() - 1; }
  Vector apex() const { return framework.config.point(apex_index); }
  /// Non-apex points, one per row, in vertex order 1..n-1.
  Matrix base_points() const {
    return framework.config.points().bottomRows(base_count());
  }
};

/// Per-base-vertex sliding factors, all nonzero: vertex i moves to
/// apex + s_i (p_i - apex).
struct SlideScales {
  Vector values;

  explicit SlideScales(Vector v, const Tolerance& tol = {}) : values(std::move(v)) {
    tol.validate();
    require_finite(values, "SlideScales");
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (std::abs(values(i)) <= tol.absolute_floor)
        throw std::invalid_argument("SlideScales: scales must be nonzero");
  }

  int count() const { return static_cast<int>(values.size()); }
};

/// Hyperplane { x : normal . x = offset } with a nonzero normal.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  Hyperplane(Vector n, double c, const Tolerance& tol = {})
      : normal(std::move(n)), offset(c) {
    tol.validate();
    require_finite(normal, "Hyperplane");
    if (!std::isfinite(offset)) throw std::invalid_argument("Hyperplane: non-finite offset");
    if (normal.norm() <= tol.absolute_floor)
      throw std::invalid_argument("Hyperplane: zero normal");
  }

  double signed_distance(const Vector& x) const {
    return (normal.dot(x) - offset) / normal.norm();
  }
};

/// Lift a framework one dimension up: base points get last coordinate 0, a
/// new apex (vertex 0) sits over the centroid at the given height, connected
/// to everything.
inline ConeFramework cone(const Framework& f, double apex_height,
                          const Tolerance& tol = {}) {
  tol.validate();
  if (!std::isfinite(apex_height) || std::abs(apex_height) <= tol.absolute_floor)
    throw std::invalid_argument("cone: apex height must be nonzero");

  const int n = f.vertex_count();
  const int d = f.dim();
  Matrix points = Matrix::Zero(n + 1, d + 1);
  points.block(1, 0, n, d) = f.config.points();
  points.row(0).head(d) = f.config.points().colwise().mean();
  points(0, d) = apex_height;

  std::vector<Edge> edges;
  edges.reserve(f.edge_count() + n);
  for (int i = 1; i <= n; ++i) edges.emplace_back(0, i);
  for (const Edge& e : f.graph.edges())
    edges.emplace_back(e.first + 1, e.second + 1);

  return ConeFramework(Framework(Graph(n + 1, std::move(edges)),
                                 Configuration(std::move(points), tol), tol));
}

/// Move every base vertex along its apex ray: p_i -> apex + s_i (p_i - apex).
inline ConeFramework slide(const ConeFramework& cf, const SlideScales& scales,
                           const Tolerance& tol = {}) {
  tol.validate();
  if (scales.count() != cf.base_count())
    throw std::invalid_argument("slide: one scale per non-apex vertex required");

  const Vector apex = cf.apex();
  Matrix points = cf.framework.config.points();
  for (int i = 0; i < cf.base_count(); ++i) {
    const Vector ray = points.row(i + 1).transpose() - apex;
    points.row(i + 1) = (apex + scales.values(i) * ray).transpose();
  }
  return ConeFramework(Framework(cf.framework.graph,
                                 Configuration(std::move(points), tol), tol));
}

struct SlideToFlat {
  ConeFramework framework;
  SlideScales scales;
  Hyperplane hyperplane;
};

/// Slide every base vertex along its apex ray onto the given hyperplane.  The
/// apex must stay off the hyperplane and no ray may be parallel to it.
inline SlideToFlat slide_to_flat(const ConeFramework& cf, const Hyperplane& target,
                                 const Tolerance& tol = {}) {
  tol.validate();
  if (target.normal.size() != cf.framework.dim())
    throw std::invalid_argument("slide_to_flat: hyperplane dimension mismatch");

  const Vector apex = cf.apex();
  const double apex_gap = target.normal.dot(apex) - target.offset;
  if (std::abs(apex_gap) <= tol.cutoff(target.normal.norm() * (1.0 + apex.norm())))
    throw std::invalid_argument("slide_to_flat: apex lies on the hyperplane");

  Vector scales(cf.base_count());
  for (int i = 0; i < cf.base_count(); ++i) {
    const Vector ray = cf.framework.config.point(i + 1) - apex;
    const double along = target.normal.dot(ray);
    if (std::abs(along) <= tol.cutoff(target.normal.norm() * ray.norm()))
      throw std::invalid_argument(
          "slide_to_flat: an apex ray is parallel to the hyperplane");
    scales(i) = -apex_gap / along;
  }
  SlideScales s(std::move(scales), tol);
  return {slide(cf, s, tol), std::move(s), target};
}

namespace detail {

/// Best-fit hyperplane through the base points (least-squares normal).
inline Hyperplane base_fit_hyperplane(const ConeFramework& cf, const Tolerance& tol) {
  const Matrix base = cf.base_points();
  const Vector centroid = base.colwise().mean().transpose();
  const Matrix centered = base.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeFullV);
  const Vector normal = svd.matrixV().col(svd.matrixV().cols() - 1);
  return Hyperplane(normal, normal.dot(centroid), tol);
}

}  // namespace detail

/// Slide onto an automatically chosen hyperplane: the best-fit plane of the
/// base points, shifted along its normal when the apex sits too close to it.
inline SlideToFlat slide_to_flat(const ConeFramework& cf, const Tolerance& tol = {}) {
  tol.validate();
  Hyperplane plane = detail::base_fit_hyperplane(cf, tol);

  const Matrix base = cf.base_points();
  double spread = 1.0;
  for (int i = 0; i < base.rows(); ++i)
    spread = std::max(spread, (base.row(i).transpose() - cf.apex()).norm());
  const double apex_gap = plane.normal.dot(cf.apex()) - plane.offset;
  if (std::abs(apex_gap) < 0.1 * spread) {
    const double side = apex_gap >= 0.0 ? 1.0 : -1.0;
    plane.offset = plane.normal.dot(cf.apex()) - side * 0.1 * spread;
  }
  return slide_to_flat(cf, plane, tol);
}

namespace detail {

/// Hyperplane of a flat cone framework (base points coplanar, apex off the
/// plane), or nothing when the base is not flat.
inline std::optional<Hyperplane> flat_base_hyperplane(const ConeFramework& cf,
                                                      const Tolerance& tol) {
  const Matrix base = cf.base_points();
  if (base.rows() < cf.framework.dim())
    return std::nullopt;  // cannot pin down a hyperplane
  const Vector centroid = base.colwise().mean().transpose();
  const Matrix centered = base.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  if (sv.size() == static_cast<Eigen::Index>(cf.framework.dim()) &&
      sv(sv.size() - 1) > tol.cutoff(top))
    return std::nullopt;  // base spans the whole ambient space
  const Vector normal = svd.matrixV().col(svd.matrixV().cols() - 1);
  Hyperplane plane(normal, normal.dot(centroid), tol);
  for (int i = 0; i < base.rows(); ++i) {
    const double off = plane.normal.dot(base.row(i).transpose()) - plane.offset;
    if (std::abs(off) > tol.cutoff(1.0 + base.row(i).norm())) return std::nullopt;
  }
  const double apex_gap = plane.normal.dot(cf.apex()) - plane.offset;
  if (std::abs(apex_gap) <= tol.cutoff(1.0 + cf.apex().norm())) return std::nullopt;
  return plane;
}

}  // namespace detail

/// Drop the apex of a flat cone framework and re-coordinatize its base within
/// the base hyperplane (orthonormal coordinates, so edge lengths survive
/// exactly).  The base must be flat and the apex off the base plane.
inline Framework slice(const ConeFramework& cf, const Tolerance& tol = {}) {
  tol.validate();
  const auto plane = detail::flat_base_hyperplane(cf, tol);
  if (!plane)
    throw std::invalid_argument(
        "slice: base points are not flat (or the apex lies on their plane)");

  const int d = cf.framework.dim();
  const Matrix base = cf.base_points();
  const Vector centroid = base.colwise().mean().transpose();
  const Matrix centered = base.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeFullV);
  Matrix axes = svd.matrixV().leftCols(d - 1);
  // Deterministic axis signs: largest-magnitude entry positive.
  for (Eigen::Index c = 0; c < axes.cols(); ++c) {
    Eigen::Index at = 0;
    axes.col(c).cwiseAbs().maxCoeff(&at);
    if (axes(at, c) < 0) axes.col(c) = -axes.col(c);
  }

  Matrix points = centered * axes;

  std::vector<Edge> edges;
  for (const Edge& e : cf.framework.graph.edges())
    if (e.first != ConeFramework::apex_index)
      edges.emplace_back(e.first - 1, e.second - 1);

  return Framework(Graph(cf.base_count(), std::move(edges)),
                   Configuration(std::move(points), tol), tol);
}

/// Transport an equilibrium stress of a cone framework onto the slid cone
/// framework: scale the base block by 1/s on each side and rebuild the apex
/// row so row sums stay zero.  Rank and signature are preserved.
inline StressMatrix transport_stress_slide(const StressMatrix& stress,
                                           const ConeFramework& cf,
                                           const SlideScales& scales,
                                           const Tolerance& tol = {}) {
  tol.validate();
  const int n = cf.framework.vertex_count();
  if (stress.size() != n)
    throw std::invalid_argument("transport_stress_slide: stress size mismatch");
  if (scales.count() != cf.base_count())
    throw std::invalid_argument("transport_stress_slide: scale count mismatch");
  if (!check_stress(stress, cf.framework, tol).is_equilibrium)
    throw std::invalid_argument(
        "transport_stress_slide: stress is not an equilibrium stress of the cone framework");

  const Vector inv = scales.values.cwiseInverse();
  const Matrix base_block = stress.omega.bottomRightCorner(n - 1, n - 1);
  const Matrix scaled = inv.asDiagonal() * base_block * inv.asDiagonal();

  Matrix out = Matrix::Zero(n, n);
  out.bottomRightCorner(n - 1, n - 1) = scaled;
  const Vector row_sums = scaled.rowwise().sum();
  out.block(0, 1, 1, n - 1) = -row_sums.transpose();
  out.block(1, 0, n - 1, 1) = -row_sums;
  out(0, 0) = row_sums.sum();
  return {symmetrized(out)};
}

/// Pad a stress with a zero apex row and column; the result is an
/// equilibrium stress of any cone over the original framework.
inline StressMatrix cone_stress(const StressMatrix& stress) {
  const int n = stress.size();
  Matrix out = Matrix::Zero(n + 1, n + 1);
  out.bottomRightCorner(n, n) = stress.omega;
  return {out};
}

/// Restrict a stress of a flat cone framework to its base.  Equilibrium at a
/// flat cone forces the apex row to vanish, so dropping it loses nothing;
/// a non-vanishing apex row is reported as an error.
inline StressMatrix slice_stress(const StressMatrix& stress, const ConeFramework& cf,
                                 const Tolerance& tol = {}) {
  tol.validate();
  const int n = cf.framework.vertex_count();
  if (stress.size() != n)
    throw std::invalid_argument("slice_stress: stress size mismatch");
  if (!detail::flat_base_hyperplane(cf, tol))
    throw std::invalid_argument("slice_stress: cone framework is not flat");
  const double apex_row = stress.omega.row(ConeFramework::apex_index).norm();
  if (apex_row > tol.cutoff(stress.omega.norm()))
    throw std::invalid_argument(
        "slice_stress: apex row of the stress does not vanish");
  return {stress.omega.bottomRightCorner(n - 1, n - 1)};
}

/// Invertible (d+1) x (d+1) matrix acting on homogeneous coordinates.
struct ProjectiveTransform {
  Matrix matrix;

  explicit ProjectiveTransform(Matrix h, const Tolerance& tol = {})
      : matrix(std::move(h)) {
    tol.validate();
    require_finite(matrix, "ProjectiveTransform");
    if (matrix.rows() != matrix.cols() || matrix.rows() < 2)
      throw std::invalid_argument("ProjectiveTransform: need a square matrix");
    if (rank_nullspace(matrix, tol).rank != matrix.rows())
      throw std::invalid_argument("ProjectiveTransform: matrix is singular");
  }

  int ambient_dim() const { return static_cast<int>(matrix.rows()) - 1; }

  /// Image of an affine point; the last homogeneous coordinate of the image
  /// must stay away from zero.
  Vector apply(const Vector& x, const Tolerance& tol = {}) const {
    if (x.size() != ambient_dim())
      throw std::invalid_argument("ProjectiveTransform: point dimension mismatch");
    Vector xh(x.size() + 1);
    xh << x, 1.0;
    const Vector image = matrix * xh;
    const double w = image(image.size() - 1);
    if (std::abs(w) <= tol.cutoff(image.norm()))
      throw std::invalid_argument("ProjectiveTransform: point maps to infinity");
    return image.head(x.size()) / w;
  }
};

/// Apply a projective transform to every vertex.  Fails when any vertex is
/// sent to infinity or the image degenerates.
inline Framework projective_transform(const Framework& f, const ProjectiveTransform& h,
                                      const Tolerance& tol = {}) {
  tol.validate();
  if (h.ambient_dim() != f.dim())
    throw std::invalid_argument("projective_transform: dimension mismatch");
  Matrix points(f.vertex_count(), f.dim());
  for (int i = 0; i < f.vertex_count(); ++i)
    points.row(i) = h.apply(f.config.point(i), tol).transpose();
  return Framework(f.graph, Configuration(std::move(points), tol), tol);
}

/// Transport an equilibrium stress through a projective transform of the
/// framework.  Implemented by the cone-slide-slice route: lift the stress to
/// the homogeneous cone over the framework, move the lifted points by the
/// linear map (stresses are untouched by linear maps), slide back to the
/// affine chart and cut the apex away.  The net effect is a two-sided
/// diagonal scaling by the homogenizing denominators, preserving rank and
/// signature.
inline StressMatrix transport_stress_projective(const StressMatrix& stress,
                                                const Framework& f,
                                                const ProjectiveTransform& h,
                                                const Tolerance& tol = {}) {
  tol.validate();
  const int n = f.vertex_count();
  const int d = f.dim();
  if (stress.size() != n)
    throw std::invalid_argument("transport_stress_projective: stress size mismatch");
  if (h.ambient_dim() != d)
    throw std::invalid_argument("transport_stress_projective: dimension mismatch");
  if (!check_stress(stress, f, tol).is_equilibrium)
    throw std::invalid_argument(
        "transport_stress_projective: stress is not an equilibrium stress");

  // Homogeneous cone over f: apex at the origin of E^{d+1}, base points
  // (p_i, 1), apex joined to everything.
  std::vector<Edge> edges;
  edges.reserve(f.edge_count() + n);
  for (int i = 1; i <= n; ++i) edges.emplace_back(0, i);
  for (const Edge& e : f.graph.edges())
    edges.emplace_back(e.first + 1, e.second + 1);
  const Graph cone_graph(n + 1, std::move(edges));

  Matrix lifted = Matrix::Zero(n + 1, d + 1);
  lifted.block(1, 0, n, d) = f.config.points();
  lifted.col(d).tail(n).setOnes();

  // Move the lifted points by the linear map; equilibrium stresses are
  // invariant under linear maps, so the padded stress carries over as is.
  const Matrix moved_base = lifted.bottomRows(n) * h.matrix.transpose();
  Vector scales(n);
  for (int i = 0; i < n; ++i) {
    const double w = moved_base(i, d);
    if (std::abs(w) <= tol.cutoff(moved_base.row(i).norm()))
      throw std::invalid_argument(
          "transport_stress_projective: a vertex maps to infinity");
    scales(i) = 1.0 / w;
  }
  Matrix moved = Matrix::Zero(n + 1, d + 1);
  moved.bottomRows(n) = moved_base;
  const ConeFramework moved_cone(
      Framework(cone_graph, Configuration(std::move(moved), tol), tol));

  const StressMatrix lifted_stress = cone_stress(stress);
  const StressMatrix slid =
      transport_stress_slide(lifted_stress, moved_cone, SlideScales(scales, tol), tol);
  const ConeFramework flat_cone = slide(moved_cone, SlideScales(scales, tol), tol);
  return slice_stress(slid, flat_cone, tol);
}

}  // namespace rigidity
