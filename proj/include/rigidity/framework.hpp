#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "rigidity/numerics.hpp"

namespace rigidity {

/// Undirected edge, stored with the smaller vertex first.
using Edge = std::pair<int, int>;

/// Simple connected undirected graph on vertices 0..n-1.  Edges are
/// normalized (i < j), sorted lexicographically and duplicate-free, so the
/// edge index of a given pair is deterministic.
class Graph {
 public:
  Graph(int vertex_count, std::vector<Edge> edges)
      : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ < 2) throw std::invalid_argument("Graph: need at least two vertices");
    for (Edge& e : edges_) {
      if (e.first == e.second)
        throw std::invalid_argument("Graph: loop edge");
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.first < 0 || e.second >= n_)
        throw std::invalid_argument("Graph: edge endpoint out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("Graph: duplicate edge");

    adjacency_.assign(n_, {});
    for (const Edge& e : edges_) {
      adjacency_[e.first].push_back(e.second);
      adjacency_[e.second].push_back(e.first);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    // connectivity
    std::vector<char> seen(n_, 0);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!todo.empty()) {
      int v = todo.front();
      todo.pop();
      for (int w : adjacency_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          todo.push(w);
        }
    }
    if (reached != n_) throw std::invalid_argument("Graph: not connected");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }

  /// Vertex v together with its neighbors, ascending.
  std::vector<int> inclusive_neighborhood(int v) const {
    std::vector<int> out = neighbors(v);
    out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Point configuration in E^d: one row per vertex.  Must affinely span the
/// whole ambient space -- degenerate embeddings are rejected so that
/// dimension-dependent counts (such as the target stress rank n-d-1) are
/// meaningful.
class Configuration {
 public:
  explicit Configuration(Matrix points, const Tolerance& tol = {})
      : points_(std::move(points)) {
    tol.validate();
    require_finite(points_, "Configuration");
    if (points_.rows() < 1 || points_.cols() < 1)
      throw std::invalid_argument("Configuration: empty point set");
    const Matrix centered = points_.rowwise() - points_.colwise().mean();
    if (rank_nullspace(centered, tol).rank != points_.cols())
      throw std::invalid_argument(
          "Configuration: points do not affinely span the ambient space");
  }

  int count() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  Vector point(int i) const { return points_.row(i).transpose(); }

 private:
  Matrix points_;
};

/// Bar-joint framework: a graph drawn in E^d.  Adjacent vertices must be at
/// distinct positions.
struct Framework {
  Graph graph;
  Configuration config;

  Framework(Graph g, Configuration c, const Tolerance& tol = {})
      : graph(std::move(g)), config(std::move(c)) {
    tol.validate();
    if (graph.vertex_count() != config.count())
      throw std::invalid_argument("Framework: vertex/point count mismatch");
    const double scale = config.points().rowwise().norm().maxCoeff();
    for (const Edge& e : graph.edges()) {
      const double len =
          (config.point(e.first) - config.point(e.second)).norm();
      if (len <= tol.absolute_floor * (1.0 + scale))
        throw std::invalid_argument("Framework: adjacent vertices coincide");
    }
  }

  int vertex_count() const { return graph.vertex_count(); }
  int edge_count() const { return graph.edge_count(); }
  int dim() const { return config.dim(); }
};

/// Edge displacement vectors p_i - p_j, one row per edge, in edge order.
inline Matrix edge_vectors(const Framework& f) {
  Matrix out(f.edge_count(), f.dim());
  for (int e = 0; e < f.edge_count(); ++e) {
    const Edge& ed = f.graph.edges()[e];
    out.row(e) = f.config.points().row(ed.first) - f.config.points().row(ed.second);
  }
  return out;
}

/// Same squared edge lengths, edge by edge.  The two frameworks must share
/// one graph; the ambient dimensions may differ.
inline bool is_equivalent(const Framework& a, const Framework& b,
                          const Tolerance& tol = {}) {
  tol.validate();
  if (!(a.graph == b.graph))
    throw std::invalid_argument("is_equivalent: frameworks have different graphs");
  const Matrix ea = edge_vectors(a);
  const Matrix eb = edge_vectors(b);
  for (int e = 0; e < a.edge_count(); ++e) {
    const double la = ea.row(e).squaredNorm();
    const double lb = eb.row(e).squaredNorm();
    if (std::abs(la - lb) > tol.cutoff(std::max(la, lb))) return false;
  }
  return true;
}

/// Symmetric n-by-n matrix supported on the graph, with each diagonal entry
/// the negated sum of its row's off-diagonal entries (so the all-ones vector
/// is always in the kernel).
struct StressMatrix {
  Matrix omega;

  int size() const { return static_cast<int>(omega.rows()); }
};

/// Build the stress matrix for one weight per edge:
///   omega_ij = -w_ij on edges, 0 on non-edges, diagonal = row sums negated.
inline StressMatrix assemble_stress(const Graph& g, const Vector& weights) {
  if (weights.size() != g.edge_count())
    throw std::invalid_argument("assemble_stress: one weight per edge required");
  require_finite(weights, "assemble_stress");
  const int n = g.vertex_count();
  Matrix omega = Matrix::Zero(n, n);
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [i, j] = g.edges()[e];
    const double w = weights(e);
    omega(i, j) -= w;
    omega(j, i) -= w;
    omega(i, i) += w;
    omega(j, j) += w;
  }
  return {omega};
}

/// Read the edge weights back off a stress matrix (w_ij = -omega_ij).
inline Vector edge_weights(const Graph& g, const StressMatrix& stress) {
  if (stress.size() != g.vertex_count())
    throw std::invalid_argument("edge_weights: size mismatch");
  Vector w(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [i, j] = g.edges()[e];
    w(e) = -stress.omega(i, j);
  }
  return w;
}

/// Basis of the equilibrium stress space of a framework.  `elements` are the
/// stress matrices; `weight_coordinates` holds the corresponding edge-weight
/// vectors as orthonormal columns (m x dim).
struct StressBasis {
  std::vector<StressMatrix> elements;
  Matrix weight_coordinates;

  int dimension() const { return static_cast<int>(elements.size()); }
};

namespace detail {

/// Equilibrium constraint matrix on edge weights: row (i,k) demands that the
/// weighted edge vectors at vertex i sum to zero in coordinate k.  Vectors w
/// with A w = 0 are exactly the equilibrium stresses.
inline Matrix equilibrium_constraints(const Framework& f) {
  const int n = f.vertex_count();
  const int d = f.dim();
  const int m = f.edge_count();
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n) * d, m);
  for (int e = 0; e < m; ++e) {
    const auto [i, j] = f.graph.edges()[e];
    const Vector diff = f.config.point(i) - f.config.point(j);
    for (int k = 0; k < d; ++k) {
      a(static_cast<Eigen::Index>(i) * d + k, e) = diff(k);
      a(static_cast<Eigen::Index>(j) * d + k, e) = -diff(k);
    }
  }
  return a;
}

}  // namespace detail

/// Orthonormal basis (in edge-weight coordinates) of all equilibrium
/// stresses of the framework.
inline StressBasis stress_space_basis(const Framework& f, const Tolerance& tol = {}) {
  tol.validate();
  const RankNullspace ns = rank_nullspace(detail::equilibrium_constraints(f), tol);
  StressBasis basis;
  basis.weight_coordinates = ns.nullspace;
  basis.elements.reserve(ns.nullspace.cols());
  for (Eigen::Index k = 0; k < ns.nullspace.cols(); ++k)
    basis.elements.push_back(assemble_stress(f.graph, ns.nullspace.col(k)));
  return basis;
}

/// Diagnostic summary of one stress matrix against one framework.
struct StressCheck {
  bool is_equilibrium = false;
  int rank = 0;
  SignatureTriple signature;
  /// max of the relative residuals of omega * P = 0 and omega * 1 = 0.
  double relative_residual = 0.0;
};

inline StressCheck check_stress(const StressMatrix& stress, const Framework& f,
                                const Tolerance& tol = {}) {
  tol.validate();
  if (stress.size() != f.vertex_count())
    throw std::invalid_argument("check_stress: stress size does not match framework");
  require_finite(stress.omega, "check_stress");

  const Matrix& omega = stress.omega;
  const int n = f.vertex_count();
  const double omega_norm = omega.norm();

  const double res_points = (omega * f.config.points()).norm();
  const double res_ones = (omega * Vector::Ones(n)).norm();
  const double scale_points = omega_norm * f.config.points().norm();
  const double scale_ones = omega_norm * std::sqrt(double(n));

  StressCheck out;
  out.is_equilibrium = res_points <= tol.cutoff(scale_points) &&
                       res_ones <= tol.cutoff(scale_ones);
  out.relative_residual =
      std::max(res_points / std::max(scale_points, tol.absolute_floor),
               res_ones / std::max(scale_ones, tol.absolute_floor));
  out.signature = eigen_signature(omega, tol);
  out.rank = out.signature.rank();
  return out;
}

}  // namespace rigidity
