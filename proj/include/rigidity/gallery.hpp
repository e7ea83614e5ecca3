#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "rigidity/conic.hpp"
#include "rigidity/framework.hpp"
#include "rigidity/operations.hpp"

namespace rigidity::gallery {

/// Square grid graph on k x k unit-spaced points centered at the origin.
/// Carries a conic at infinity (only two edge directions) but no ruling and
/// only the zero equilibrium stress.
inline Framework grid(int k) {
  if (k < 2) throw std::invalid_argument("grid: need k >= 2");
  const double shift = (k - 1) / 2.0;
  Matrix points(k * k, 2);
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int v = i * k + j;
      points(v, 0) = i - shift;
      points(v, 1) = j - shift;
      if (i + 1 < k) edges.emplace_back(v, v + k);
      if (j + 1 < k) edges.emplace_back(v, v + 1);
    }
  return Framework(Graph(k * k, std::move(edges)), Configuration(std::move(points)));
}

/// Two vertical posts of three joints each, tied by three horizontal rungs.
/// All edges use just two directions, so a conic at infinity is guaranteed;
/// the constructor double-checks that.
inline Framework gate() {
  Matrix points(6, 2);
  points << 0, 0, 2, 0, 0, 1, 2, 1, 0, 2, 2, 2;
  std::vector<Edge> edges = {{0, 2}, {2, 4}, {1, 3}, {3, 5}, {0, 1}, {2, 3}, {4, 5}};
  Framework f(Graph(6, std::move(edges)), Configuration(std::move(points)));
  if (conic_space(f).empty())
    throw std::logic_error("gate: expected a conic at infinity");
  return f;
}

/// Two complete collinear triples sharing the origin, one along each axis.
/// Ruled by the pair of axes, with a two-dimensional stress space whose
/// positive combinations reach rank n-3.
inline Framework two_lines_braced() {
  Matrix points(5, 2);
  points << 0, 0, 1, 0, 2, 0, 0, 1, 0, 2;
  std::vector<Edge> edges = {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}};
  return Framework(Graph(5, std::move(edges)), Configuration(std::move(points)));
}

/// s x t points of the surface z = x y, with the points of each coordinate
/// line joined completely.  Every edge runs along a ruling of the surface.
inline Framework hyperbolic_paraboloid(int s, int t) {
  if (s < 3 || t < 3)
    throw std::invalid_argument("hyperbolic_paraboloid: need s, t >= 3");
  Matrix points(s * t, 3);
  std::vector<Edge> edges;
  const auto index = [t](int a, int b) { return (a - 1) * t + (b - 1); };
  for (int a = 1; a <= s; ++a)
    for (int b = 1; b <= t; ++b) {
      const int v = index(a, b);
      points(v, 0) = a;
      points(v, 1) = b;
      points(v, 2) = double(a) * b;
      for (int b2 = b + 1; b2 <= t; ++b2) edges.emplace_back(v, index(a, b2));
      for (int a2 = a + 1; a2 <= s; ++a2) edges.emplace_back(v, index(a2, b));
    }
  return Framework(Graph(s * t, std::move(edges)), Configuration(std::move(points)));
}

/// Complete graph on k collinear points, given in E^1.  Universally rigid:
/// the maximum-rank PSD stress has corank exactly 2.
inline Framework collinear_complete(int k) {
  if (k < 2) throw std::invalid_argument("collinear_complete: need k >= 2");
  Matrix points(k, 1);
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) {
    points(i, 0) = i;
    for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
  }
  return Framework(Graph(k, std::move(edges)), Configuration(std::move(points)));
}

/// Apex at the origin plus four rulings of the circular cone x^2 + y^2 = z^2,
/// three points per ruling, each ruling joined completely (apex included).
/// Ruled and neighborhood affine rigid, yet every equilibrium stress stays
/// below rank n-4: the stresses live line by line.
inline Framework elliptic_cone() {
  const double angles_deg[] = {0.0, 80.0, 160.0, 240.0};
  Matrix points = Matrix::Zero(13, 3);
  std::vector<Edge> edges;
  int v = 1;
  for (double deg : angles_deg) {
    const double theta = deg * std::numbers::pi / 180.0;
    const int line_start = v;
    for (int step = 1; step <= 3; ++step, ++v) {
      points(v, 0) = step * std::cos(theta);
      points(v, 1) = step * std::sin(theta);
      points(v, 2) = step;
      edges.emplace_back(0, v);
      for (int w = line_start; w < v; ++w) edges.emplace_back(w, v);
    }
  }
  return Framework(Graph(13, std::move(edges)), Configuration(std::move(points)));
}

/// Two complete pentads, one in the plane y = 0 and one in x = 0, sharing two
/// vertices on the common axis.  Ruled by the degenerate quadric x y = 0;
/// the shared vertices sit at its cone points.
inline Framework two_planes() {
  Matrix points(8, 3);
  points << 0, 0, 0,     // 0: shared, on the axis
      0, 0, 2,           // 1: shared, on the axis
      1, 0, 0.3,         // 2..4: plane y = 0
      2, 0, 1.1,         //
      1.4, 0, 2.4,       //
      0, 1, 0.4,         // 5..7: plane x = 0
      0, 2.2, 1.3,       //
      0, 1.5, 2.2;       //
  std::vector<Edge> edges;
  const std::vector<int> plane_a = {0, 1, 2, 3, 4};
  const std::vector<int> plane_b = {0, 1, 5, 6, 7};
  for (size_t i = 0; i < plane_a.size(); ++i)
    for (size_t j = i + 1; j < plane_a.size(); ++j)
      edges.emplace_back(plane_a[i], plane_a[j]);
  for (size_t i = 0; i < plane_b.size(); ++i)
    for (size_t j = i + 1; j < plane_b.size(); ++j)
      if (!(plane_b[i] == 0 && plane_b[j] == 1))
        edges.emplace_back(plane_b[i], plane_b[j]);
  return Framework(Graph(8, std::move(edges)), Configuration(std::move(points)));
}

/// K4 drawn as a triangle with its centroid: the textbook super stable
/// framework.
inline Framework triangle_with_center() {
  Matrix points(4, 2);
  points << 0, 0, 2, 0, 0.8, 1.8;
  Matrix all(4, 2);
  all.topRows(3) = points.topRows(3);
  all.row(3) = points.topRows(3).colwise().mean();
  std::vector<Edge> edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  return Framework(Graph(4, std::move(edges)), Configuration(std::move(all)));
}

/// Cone over any of the gallery frameworks (or anything else).
inline ConeFramework cone_of(const Framework& f, double apex_height = 1.0) {
  return cone(f, apex_height);
}

/// Named access for the command line: parameters are passed as strings.
struct GallerySpec {
  std::string name;
  std::map<std::string, std::string> parameters;
};

namespace detail {

inline int int_parameter(const GallerySpec& spec, const std::string& key,
                         int fallback) {
  const auto it = spec.parameters.find(key);
  if (it == spec.parameters.end()) return fallback;
  try {
    size_t used = 0;
    const int value = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("gallery: parameter '" + key +
                                "' must be an integer, got '" + it->second + "'");
  }
}

inline double double_parameter(const GallerySpec& spec, const std::string& key,
                               double fallback) {
  const auto it = spec.parameters.find(key);
  if (it == spec.parameters.end()) return fallback;
  try {
    size_t used = 0;
    const double value = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("gallery: parameter '" + key +
                                "' must be a number, got '" + it->second + "'");
  }
}

}  // namespace detail

inline std::vector<std::string> names() {
  return {"grid",          "gate",       "two_lines_braced",
          "hyperbolic_paraboloid", "collinear_complete", "elliptic_cone",
          "two_planes",    "triangle_with_center",       "cone_of"};
}

inline Framework generate(const GallerySpec& spec) {
  if (spec.name == "grid") return grid(detail::int_parameter(spec, "k", 3));
  if (spec.name == "gate") return gate();
  if (spec.name == "two_lines_braced") return two_lines_braced();
  if (spec.name == "hyperbolic_paraboloid")
    return hyperbolic_paraboloid(detail::int_parameter(spec, "s", 3),
                                 detail::int_parameter(spec, "t", 3));
  if (spec.name == "collinear_complete")
    return collinear_complete(detail::int_parameter(spec, "k", 3));
  if (spec.name == "elliptic_cone") return elliptic_cone();
  if (spec.name == "two_planes") return two_planes();
  if (spec.name == "triangle_with_center") return triangle_with_center();
  if (spec.name == "cone_of") {
    const auto it = spec.parameters.find("of");
    if (it == spec.parameters.end())
      throw std::invalid_argument("gallery: cone_of needs an 'of' parameter");
    if (it->second == "cone_of")
      throw std::invalid_argument("gallery: cone_of cannot nest");
    GallerySpec inner{it->second, spec.parameters};
    inner.parameters.erase("of");
    inner.parameters.erase("height");
    return cone_of(generate(inner), detail::double_parameter(spec, "height", 1.0))
        .framework;
  }
  throw std::invalid_argument("gallery: unknown generator '" + spec.name + "'");
}

}  // namespace rigidity::gallery
