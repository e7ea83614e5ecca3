#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rigidity/affine.hpp"
#include "rigidity/conic.hpp"
#include "rigidity/framework.hpp"

namespace rigidity {

/// Controls for the alternating-projection search for a maximum-rank PSD
/// equilibrium stress.
struct PsdSearchParams {
  int restarts = 16;
  int max_iterations = 10000;
  double convergence = 1e-12;

  void validate() const {
    if (restarts < 1 || max_iterations < 1 || !(convergence > 0.0))
      throw std::invalid_argument("PsdSearchParams: invalid parameters");
  }
};

namespace detail {

struct PsdSearch {
  std::optional<StressMatrix> stress;
  int converged_count = 0;
  std::vector<int> witness_ranks;
  int stress_rank = 0;
};

/// Alternating projections between the equilibrium stress span and the PSD
/// cone, restarted from random unit points of the span.  Each converged
/// nonzero PSD endpoint is kept; the normalized average of the kept
/// endpoints is returned (averaging PSD matrices can only grow the rank, so
/// the average attains the maximum rank over the kept witnesses).
inline PsdSearch find_max_rank_psd_stress_detailed(const StressBasis& basis, int n,
                                                   std::uint64_t seed,
                                                   const PsdSearchParams& params,
                                                   const Tolerance& tol) {
  params.validate();
  tol.validate();
  PsdSearch out;
  const int dim = basis.dimension();
  if (dim == 0) return out;

  Matrix span(sym_coord_dim(n), dim);
  for (int k = 0; k < dim; ++k)
    span.col(k) = sym_to_coords(basis.elements[static_cast<size_t>(k)].omega);
  Eigen::HouseholderQR<Matrix> qr(span);
  const Matrix q = qr.householderQ() * Matrix::Identity(span.rows(), dim);

  const auto project_span = [&](const Matrix& x) {
    return coords_to_sym(q * (q.transpose() * sym_to_coords(x)), n);
  };

  constexpr double kZeroNorm = 1e-8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix sum = Matrix::Zero(n, n);
  for (int r = 0; r < params.restarts; ++r) {
    Vector coeffs(dim);
    for (int k = 0; k < dim; ++k) coeffs(k) = gauss(rng);
    coeffs.normalize();
    Matrix x = coords_to_sym(q * coeffs, n);

    bool converged = false;
    for (int it = 0; it < params.max_iterations; ++it) {
      const Matrix next = project_span(psd_project(x));
      const double step = (next - x).norm();
      x = next;
      if (x.norm() < kZeroNorm) break;
      if (step < params.convergence) {
        converged = true;
        break;
      }
    }
    if (!converged || x.norm() < kZeroNorm) continue;
    const SignatureTriple sig = eigen_signature(x, tol);
    if (sig.negatives > 0) continue;  // stalled short of the cone
    sum += x / x.norm();
    ++out.converged_count;
    out.witness_ranks.push_back(sig.rank());
  }
  if (out.converged_count == 0) return out;

  Matrix avg = sum / out.converged_count;
  avg /= avg.norm();
  out.stress_rank = eigen_signature(avg, tol).rank();
  out.stress = StressMatrix{std::move(avg)};
  return out;
}

}  // namespace detail

/// Best-effort maximum-rank PSD equilibrium stress of the framework, or
/// nothing when every search run collapses to zero (in particular whenever
/// the stress space is trivial).
inline std::optional<StressMatrix> find_max_rank_psd_stress(
    const Framework& f, std::uint64_t seed, const PsdSearchParams& params = {},
    const Tolerance& tol = {}) {
  return detail::find_max_rank_psd_stress_detailed(stress_space_basis(f, tol),
                                                   f.vertex_count(), seed, params, tol)
      .stress;
}

/// Rank of one random combination of the stress basis.  With probability one
/// over the coefficients this attains the maximum rank over the whole space.
inline int generic_stress_rank(const StressBasis& basis, std::uint64_t seed,
                               const Tolerance& tol = {}) {
  tol.validate();
  if (basis.dimension() == 0) return 0;
  const int n = basis.elements.front().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix combo = Matrix::Zero(n, n);
  for (const StressMatrix& s : basis.elements) combo += gauss(rng) * s.omega;
  return eigen_signature(combo, tol).rank();
}

enum class SuperStabilityVerdict { super_stable, fails_conic, fails_stress, undetermined };

inline const char* to_string(SuperStabilityVerdict v) {
  switch (v) {
    case SuperStabilityVerdict::super_stable: return "super_stable";
    case SuperStabilityVerdict::fails_conic: return "fails_conic";
    case SuperStabilityVerdict::fails_stress: return "fails_stress";
    default: return "undetermined";
  }
}

/// Outcome of the super-stability decision.
///  - super_stable: PSD stress of rank n-d-1 found and no conic at infinity.
///  - fails_conic: a conic at infinity exists (witness_conic). The framework
///    admits non-congruent equivalent configurations, so it cannot be
///    super stable regardless of its stresses.
///  - fails_stress: even a generic stress combination stays below rank
///    n-d-1, so no stress of the required rank exists at all.
///  - undetermined: the space admits full-rank combinations but the PSD
///    search did not reach rank n-d-1.
struct SuperStabilityCertificate {
  SuperStabilityVerdict verdict = SuperStabilityVerdict::undetermined;
  std::optional<StressMatrix> witness_stress;
  std::optional<ConicForm> witness_conic;
  int stress_rank = 0;
  int target_rank = 0;
};

namespace detail {

struct CertifyCore {
  StressBasis basis;
  std::vector<ConicForm> conics;
  PsdSearch psd;
  std::optional<StressMatrix> generic_combo;
  int combo_rank = 0;
  int max_generic_rank = 0;
  int target = 0;
};

inline CertifyCore certify_core(const Framework& f, std::uint64_t seed,
                                const PsdSearchParams& params, const Tolerance& tol) {
  CertifyCore core;
  core.target = f.vertex_count() - f.dim() - 1;
  core.basis = stress_space_basis(f, tol);
  core.conics = conic_space(f, tol);
  core.psd = find_max_rank_psd_stress_detailed(core.basis, f.vertex_count(), seed,
                                               params, tol);
  if (core.basis.dimension() > 0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix combo = Matrix::Zero(f.vertex_count(), f.vertex_count());
    for (const StressMatrix& s : core.basis.elements) combo += gauss(rng) * s.omega;
    core.combo_rank = eigen_signature(combo, tol).rank();
    core.generic_combo = StressMatrix{std::move(combo)};
  }
  core.max_generic_rank = std::max(core.combo_rank, core.psd.stress_rank);
  return core;
}

inline SuperStabilityCertificate make_certificate(const CertifyCore& core, int n) {
  SuperStabilityCertificate cert;
  cert.target_rank = core.target;
  cert.witness_stress = core.psd.stress;
  cert.stress_rank = core.psd.stress_rank;
  if (!cert.witness_stress && core.target == 0) {
    // Simplex-like frameworks: the zero stress already has the target rank.
    cert.witness_stress = StressMatrix{Matrix::Zero(n, n)};
    cert.stress_rank = 0;
  }
  if (!core.conics.empty()) cert.witness_conic = core.conics.front();

  if (core.max_generic_rank < core.target)
    cert.verdict = SuperStabilityVerdict::fails_stress;
  else if (!core.conics.empty())
    cert.verdict = SuperStabilityVerdict::fails_conic;
  else if (cert.witness_stress && cert.stress_rank == core.target)
    cert.verdict = SuperStabilityVerdict::super_stable;
  else
    cert.verdict = SuperStabilityVerdict::undetermined;
  return cert;
}

}  // namespace detail

/// Decide super stability: a PSD equilibrium stress of rank n-d-1 together
/// with an empty conic space certifies that every equivalent framework is
/// congruent.
inline SuperStabilityCertificate is_super_stable(const Framework& f, std::uint64_t seed,
                                                 const PsdSearchParams& params = {},
                                                 const Tolerance& tol = {}) {
  tol.validate();
  return detail::make_certificate(detail::certify_core(f, seed, params, tol),
                                  f.vertex_count());
}

namespace detail {

inline bool sap_test_impl(const StressMatrix& stress, const Graph* graph,
                          const Tolerance& tol) {
  tol.validate();
  require_finite(stress.omega, "sap_test");
  const Matrix omega = symmetrized(stress.omega);
  const int n = static_cast<int>(omega.rows());
  if (graph && graph->vertex_count() != n)
    throw std::invalid_argument("sap_test: graph does not match stress size");

  const RankNullspace ns = rank_nullspace(omega, tol);
  const int k = static_cast<int>(ns.nullspace.cols());
  if (k < 2)
    throw std::invalid_argument(
        "sap_test: stress kernel has dimension < 2, no ambient dimension fits");

  const Vector ones = Vector::Ones(n);
  const Vector coeff = ns.nullspace.transpose() * ones;
  if ((ns.nullspace * coeff - ones).norm() > tol.cutoff(std::sqrt(double(n))))
    throw std::invalid_argument(
        "sap_test: stress kernel does not contain the all-ones vector");

  // Rotate the kernel basis so the last column is the constant vector; the
  // rows then serve as homogeneous coordinates of the kernel framework.
  const Vector u = coeff.normalized();
  const RankNullspace perp = rank_nullspace(u.transpose(), tol);
  Matrix rot(k, k);
  rot.leftCols(k - 1) = perp.nullspace;
  rot.col(k - 1) = u;
  const Matrix phat = ns.nullspace * rot;

  std::vector<Edge> edges;
  if (graph) {
    edges = graph->edges();
  } else {
    const double scale = omega.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(omega(i, j)) > tol.cutoff(scale)) edges.emplace_back(i, j);
  }

  // The stress has the Strong Arnold Property exactly when its kernel
  // framework is unruled.
  return incidence_solution_space(phat, edges, tol).empty();
}

}  // namespace detail

/// Strong Arnold Property of a stress matrix, taking the support of the
/// off-diagonal entries as the graph.
inline bool sap_test(const StressMatrix& stress, const Tolerance& tol = {}) {
  return detail::sap_test_impl(stress, nullptr, tol);
}

/// Strong Arnold Property of a stress matrix against an explicit graph.
inline bool sap_test(const StressMatrix& stress, const Graph& graph,
                     const Tolerance& tol = {}) {
  return detail::sap_test_impl(stress, &graph, tol);
}

/// One named cross-check between independently computed quantities.
/// `triggered` records whether the hypothesis held; `passed` is true when the
/// implication is vacuous or its conclusion checked out.
struct ConsistencyFlag {
  std::string name;
  bool triggered = false;
  bool passed = true;
};

/// Combined report of everything this library can say about one framework.
struct AnalysisReport {
  int vertex_count = 0;
  int dim = 0;
  int edge_count = 0;

  int conic_space_dim = 0;
  bool has_conic = false;
  int ruling_space_dim = 0;
  bool ruled = false;
  int neighborhood_affine_dim = 0;
  bool neighborhood_affine_rigid = false;

  int stress_space_dim = 0;
  int max_generic_stress_rank = 0;
  int target_rank = 0;
  std::optional<int> psd_stress_rank;

  SuperStabilityCertificate super_stability;
  std::optional<bool> sap;

  std::vector<ConsistencyFlag> consistency_flags;

  bool all_flags_pass() const {
    for (const ConsistencyFlag& f : consistency_flags)
      if (!f.passed) return false;
    return true;
  }
};

/// Run every detector on one framework and cross-check the results against
/// the implications that tie them together:
///  - "nar-conic-iff-ruled":        neighborhood affine rigid frameworks have
///                                  a conic at infinity exactly when they are
///                                  ruled;
///  - "max-stress-conic-iff-ruled": frameworks whose generic stress rank
///                                  reaches n-d-1 have a conic exactly when
///                                  they are ruled;
///  - "sap-cycle":                  a maximum-rank stress has the Strong
///                                  Arnold Property exactly when there is no
///                                  conic and no ruling;
///  - "ruled-implies-conic":        ruled frameworks always carry a conic.
inline AnalysisReport analyze(const Framework& f, std::uint64_t seed,
                              const PsdSearchParams& params = {},
                              const Tolerance& tol = {}) {
  tol.validate();
  const detail::CertifyCore core = detail::certify_core(f, seed, params, tol);

  AnalysisReport report;
  report.vertex_count = f.vertex_count();
  report.dim = f.dim();
  report.edge_count = f.edge_count();

  report.conic_space_dim = static_cast<int>(core.conics.size());
  report.has_conic = report.conic_space_dim > 0;
  report.ruling_space_dim = static_cast<int>(ruling_quadric_space(f, tol).size());
  report.ruled = report.ruling_space_dim > 0;
  const Matrix nar_space = neighborhood_affine_space(f, tol);
  report.neighborhood_affine_dim = static_cast<int>(nar_space.cols());
  report.neighborhood_affine_rigid = report.neighborhood_affine_dim == f.dim() + 1;

  report.stress_space_dim = core.basis.dimension();
  report.max_generic_stress_rank = core.max_generic_rank;
  report.target_rank = core.target;
  if (core.psd.stress) report.psd_stress_rank = core.psd.stress_rank;

  report.super_stability = detail::make_certificate(core, f.vertex_count());

  if (core.psd.stress && core.psd.stress_rank == core.target)
    report.sap = sap_test(*core.psd.stress, f.graph, tol);
  else if (core.generic_combo && core.combo_rank == core.target)
    report.sap = sap_test(*core.generic_combo, f.graph, tol);

  const auto implies = [](bool a, bool b) { return !a || b; };
  report.consistency_flags.push_back(
      {"nar-conic-iff-ruled", report.neighborhood_affine_rigid,
       implies(report.neighborhood_affine_rigid, report.has_conic == report.ruled)});
  const bool max_rank = core.max_generic_rank == core.target;
  report.consistency_flags.push_back(
      {"max-stress-conic-iff-ruled", max_rank,
       implies(max_rank, report.has_conic == report.ruled)});
  report.consistency_flags.push_back(
      {"sap-cycle", report.sap.has_value(),
       !report.sap.has_value() ||
           (*report.sap == !report.has_conic && *report.sap == !report.ruled)});
  report.consistency_flags.push_back(
      {"ruled-implies-conic", report.ruled, implies(report.ruled, report.has_conic)});
  return report;
}

}  // namespace rigidity
