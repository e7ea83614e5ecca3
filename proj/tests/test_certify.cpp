#include <catch2/catch_amalgamated.hpp>

#include <rigidity/certify.hpp>
#include <rigidity/gallery.hpp>

#include "oracles.hpp"

using namespace rigidity;

namespace {

constexpr std::uint64_t kSeed = 20240815;

int target_rank(const Framework& f) { return f.vertex_count() - f.dim() - 1; }

}  // namespace

TEST_CASE("psd search finds the unique stress of the centered triangle",
          "[certify]") {
  const Framework twc = gallery::triangle_with_center();
  const auto stress = find_max_rank_psd_stress(twc, kSeed);
  REQUIRE(stress.has_value());
  const SignatureTriple sig = eigen_signature(stress->omega);
  CHECK(sig.negatives == 0);
  CHECK(sig.rank() == 1);
  CHECK(stress->omega.norm() == Catch::Approx(1.0));
  const StressCheck check = check_stress(*stress, twc);
  CHECK(check.is_equilibrium);
  CHECK(check.relative_residual < 1e-9);
}

TEST_CASE("collinear complete graphs reach corank exactly two", "[certify]") {
  for (int k : {3, 4, 5}) {
    INFO("k = " << k);
    const Framework f = gallery::collinear_complete(k);
    const auto stress = find_max_rank_psd_stress(f, kSeed + k);
    REQUIRE(stress.has_value());
    const SignatureTriple sig = eigen_signature(stress->omega);
    CHECK(sig.negatives == 0);
    CHECK(sig.rank() == k - 2);
    CHECK(sig.zeros == 2);
    CHECK(check_stress(*stress, f).relative_residual < 1e-9);
  }
}

TEST_CASE("frameworks without stresses yield no witness", "[certify]") {
  CHECK_FALSE(find_max_rank_psd_stress(gallery::grid(3), kSeed).has_value());
  CHECK_FALSE(find_max_rank_psd_stress(gallery::gate(), kSeed).has_value());
}

TEST_CASE("psd search tops out at rank five on the nine-point saddle",
          "[certify]") {
  const Framework hp = gallery::hyperbolic_paraboloid(3, 3);
  REQUIRE(target_rank(hp) == 5);
  const detail::PsdSearch search = detail::find_max_rank_psd_stress_detailed(
      stress_space_basis(hp), hp.vertex_count(), kSeed, PsdSearchParams{},
      Tolerance{});
  REQUIRE(search.stress.has_value());
  CHECK(search.stress_rank == 5);
  for (int rank : search.witness_ranks) CHECK(rank <= 5);
  CHECK(eigen_signature(search.stress->omega).negatives == 0);
  CHECK(check_stress(*search.stress, hp).relative_residual < 1e-9);
}

TEST_CASE("averaging witnesses never loses rank", "[certify]") {
  for (const auto& [name, f] : oracle::named_gallery()) {
    const detail::PsdSearch search = detail::find_max_rank_psd_stress_detailed(
        stress_space_basis(f), f.vertex_count(), kSeed, PsdSearchParams{},
        Tolerance{});
    if (!search.stress.has_value()) continue;
    INFO(name);
    int best = 0;
    for (int rank : search.witness_ranks) best = std::max(best, rank);
    CHECK(search.stress_rank >= best);
    CHECK(search.converged_count ==
          static_cast<int>(search.witness_ranks.size()));
  }
}

TEST_CASE("every returned witness is a unit PSD equilibrium stress",
          "[certify]") {
  for (const auto& [name, f] : oracle::named_gallery()) {
    const auto stress = find_max_rank_psd_stress(f, kSeed);
    if (!stress.has_value()) continue;
    INFO(name);
    CHECK(eigen_signature(stress->omega).negatives == 0);
    CHECK(stress->omega.norm() == Catch::Approx(1.0));
    const StressCheck check = check_stress(*stress, f);
    CHECK(check.is_equilibrium);
    CHECK(check.relative_residual < 1e-9);
    CHECK(check.rank <= target_rank(f));
  }
}

TEST_CASE("search parameters are validated", "[certify]") {
  CHECK_THROWS_AS(
      find_max_rank_psd_stress(gallery::triangle_with_center(), kSeed,
                               PsdSearchParams{0, 100, 1e-12}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      find_max_rank_psd_stress(gallery::triangle_with_center(), kSeed,
                               PsdSearchParams{4, 100, 0.0}),
      std::invalid_argument);
}

TEST_CASE("generic stress rank is seed-stable and capped by the corank bound",
          "[certify]") {
  for (const auto& [name, f] : oracle::named_gallery()) {
    INFO(name);
    const StressBasis basis = stress_space_basis(f);
    const int r1 = generic_stress_rank(basis, 1);
    const int r2 = generic_stress_rank(basis, 999);
    const int r3 = generic_stress_rank(basis, 123456789);
    CHECK(r1 == r2);
    CHECK(r2 == r3);
    CHECK(r1 <= target_rank(f));
    if (basis.dimension() == 0) CHECK(r1 == 0);
  }
}

TEST_CASE("super stability verdicts across the gallery", "[certify]") {
  using V = SuperStabilityVerdict;
  const std::map<std::string, V> expected{
      {"grid3", V::fails_stress},
      {"gate", V::fails_stress},
      {"two_lines_braced", V::fails_conic},
      {"hyperbolic_paraboloid33", V::fails_conic},
      {"collinear3", V::super_stable},
      {"collinear4", V::super_stable},
      {"collinear5", V::super_stable},
      {"elliptic_cone", V::fails_stress},
      {"two_planes", V::fails_conic},
      {"triangle_with_center", V::super_stable},
      {"cone_of_triangle", V::super_stable},
      {"cone_of_two_lines", V::fails_conic},
      {"cone_of_grid3", V::fails_stress},
  };
  for (const auto& [name, f] : oracle::named_gallery()) {
    INFO(name);
    REQUIRE(expected.count(name) == 1);
    const SuperStabilityCertificate cert = is_super_stable(f, kSeed);
    CHECK(cert.verdict == expected.at(name));
    CHECK(cert.target_rank == target_rank(f));

    if (cert.verdict == V::super_stable) {
      REQUIRE(cert.witness_stress.has_value());
      CHECK(cert.stress_rank == cert.target_rank);
      CHECK(eigen_signature(cert.witness_stress->omega).negatives == 0);
      CHECK_FALSE(cert.witness_conic.has_value());
    }
    if (cert.verdict == V::fails_conic) {
      REQUIRE(cert.witness_conic.has_value());
      // the witness conic vanishes on every edge direction
      const Matrix ev = edge_vectors(f);
      for (Eigen::Index e = 0; e < ev.rows(); ++e)
        CHECK(std::abs(cert.witness_conic->value(ev.row(e).transpose())) <
              1e-10);
    }
  }
}

TEST_CASE("the braced lines fail only on the conic side", "[certify]") {
  const Framework f = gallery::two_lines_braced();
  const SuperStabilityCertificate cert = is_super_stable(f, kSeed);
  CHECK(cert.verdict == SuperStabilityVerdict::fails_conic);
  REQUIRE(cert.witness_stress.has_value());
  // the stress side is as strong as it can be: PSD of rank n-3
  CHECK(cert.stress_rank == 2);
  CHECK(cert.target_rank == 2);
}

TEST_CASE("a spanning simplex is super stable via the zero stress", "[certify]") {
  std::mt19937_64 rng(31337);
  const Framework simplex = oracle::random_complete(rng, 4, 3);
  const SuperStabilityCertificate cert = is_super_stable(simplex, kSeed);
  CHECK(cert.verdict == SuperStabilityVerdict::super_stable);
  CHECK(cert.target_rank == 0);
  REQUIRE(cert.witness_stress.has_value());
  CHECK(cert.witness_stress->omega.norm() == 0.0);
}

TEST_CASE("strong Arnold property of gallery witnesses", "[certify]") {
  const auto witness = [](const Framework& f) {
    const auto stress = find_max_rank_psd_stress(f, kSeed);
    REQUIRE(stress.has_value());
    return *stress;
  };

  const Framework twc = gallery::triangle_with_center();
  CHECK(sap_test(witness(twc)));
  CHECK(sap_test(witness(twc), twc.graph));

  const Framework lines = gallery::two_lines_braced();
  CHECK_FALSE(sap_test(witness(lines)));
  CHECK_FALSE(sap_test(witness(lines), lines.graph));

  const Framework hp = gallery::hyperbolic_paraboloid(3, 3);
  CHECK_FALSE(sap_test(witness(hp), hp.graph));

  for (int k : {3, 4, 5}) {
    const Framework f = gallery::collinear_complete(k);
    CHECK(sap_test(witness(f)));
    CHECK(sap_test(witness(f), f.graph));
  }
}

TEST_CASE("sap test rejects matrices that are not stress-like", "[certify]") {
  Matrix no_ones = Matrix::Zero(4, 4);
  no_ones(2, 2) = 1.0;
  no_ones(3, 3) = 2.0;
  CHECK_THROWS_AS(sap_test(StressMatrix{no_ones}), std::invalid_argument);

  const int n = 5;
  const Matrix tight = Matrix::Identity(n, n) -
                       Matrix::Constant(n, n, 1.0 / n);
  CHECK_THROWS_AS(sap_test(StressMatrix{tight}), std::invalid_argument);

  const Framework twc = gallery::triangle_with_center();
  const auto stress = find_max_rank_psd_stress(twc, kSeed);
  REQUIRE(stress.has_value());
  CHECK_THROWS_AS(sap_test(*stress, Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})),
                  std::invalid_argument);
}

TEST_CASE("analysis of the grid", "[certify]") {
  const AnalysisReport r = analyze(gallery::grid(3), kSeed);
  CHECK(r.vertex_count == 9);
  CHECK(r.edge_count == 12);
  CHECK(r.dim == 2);
  CHECK(r.conic_space_dim == 1);
  CHECK(r.has_conic);
  CHECK_FALSE(r.ruled);
  CHECK(r.ruling_space_dim == 0);
  CHECK_FALSE(r.neighborhood_affine_rigid);
  CHECK(r.stress_space_dim == 0);
  CHECK(r.max_generic_stress_rank == 0);
  CHECK(r.target_rank == 6);
  CHECK_FALSE(r.psd_stress_rank.has_value());
  CHECK(r.super_stability.verdict == SuperStabilityVerdict::fails_stress);
  CHECK_FALSE(r.sap.has_value());
  CHECK(r.all_flags_pass());
}

TEST_CASE("analysis of the nine-point saddle", "[certify]") {
  const AnalysisReport r = analyze(gallery::hyperbolic_paraboloid(3, 3), kSeed);
  CHECK(r.has_conic);
  CHECK(r.ruled);
  CHECK(r.neighborhood_affine_rigid);
  CHECK(r.stress_space_dim == 6);
  CHECK(r.max_generic_stress_rank == 5);
  CHECK(r.target_rank == 5);
  REQUIRE(r.psd_stress_rank.has_value());
  CHECK(*r.psd_stress_rank == 5);
  CHECK(r.super_stability.verdict == SuperStabilityVerdict::fails_conic);
  REQUIRE(r.sap.has_value());
  CHECK_FALSE(*r.sap);
  CHECK(r.all_flags_pass());
}

TEST_CASE("analysis of the centered triangle", "[certify]") {
  const AnalysisReport r = analyze(gallery::triangle_with_center(), kSeed);
  CHECK_FALSE(r.has_conic);
  CHECK_FALSE(r.ruled);
  CHECK(r.neighborhood_affine_rigid);
  CHECK(r.super_stability.verdict == SuperStabilityVerdict::super_stable);
  REQUIRE(r.sap.has_value());
  CHECK(*r.sap);
  CHECK(r.all_flags_pass());
}

TEST_CASE("analysis of the elliptic cone", "[certify]") {
  const AnalysisReport r = analyze(gallery::elliptic_cone(), kSeed);
  CHECK(r.vertex_count == 13);
  CHECK(r.target_rank == 9);
  CHECK(r.stress_space_dim == 12);
  // stresses live line by line: four blocks of rank two at best
  CHECK(r.max_generic_stress_rank == 8);
  CHECK(r.neighborhood_affine_rigid);
  CHECK(r.ruled);
  CHECK(r.has_conic);
  CHECK(r.super_stability.verdict == SuperStabilityVerdict::fails_stress);
  CHECK_FALSE(r.sap.has_value());
  CHECK(r.all_flags_pass());
}

TEST_CASE("every gallery analysis passes its consistency flags", "[certify]") {
  for (const auto& [name, f] : oracle::named_gallery()) {
    INFO(name);
    const AnalysisReport r = analyze(f, kSeed);
    for (const ConsistencyFlag& flag : r.consistency_flags) {
      INFO(flag.name);
      CHECK(flag.passed);
    }
    REQUIRE(r.consistency_flags.size() == 4);
    CHECK(r.consistency_flags[0].name == "nar-conic-iff-ruled");
    CHECK(r.consistency_flags[1].name == "max-stress-conic-iff-ruled");
    CHECK(r.consistency_flags[2].name == "sap-cycle");
    CHECK(r.consistency_flags[3].name == "ruled-implies-conic");
    CHECK(r.all_flags_pass());
    // the embedded certificate agrees with the standalone one
    CHECK(r.super_stability.verdict == is_super_stable(f, kSeed).verdict);
  }
}

TEST_CASE("random frameworks pass the consistency flags too", "[certify]") {
  std::mt19937_64 rng(4422);
  for (int round = 0; round < 30; ++round) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int n = d + 2 + static_cast<int>(rng() % 5);
    const int extra = static_cast<int>(rng() % 6);
    const Framework f = oracle::random_framework(rng, n, d, extra);
    CAPTURE(round, n, d, f.edge_count());
    const AnalysisReport r = analyze(f, kSeed + round);
    CHECK(r.all_flags_pass());
  }
}

TEST_CASE("analysis is deterministic in the seed", "[certify]") {
  const Framework f = gallery::two_lines_braced();
  const AnalysisReport a = analyze(f, 77);
  const AnalysisReport b = analyze(f, 77);
  CHECK(a.super_stability.verdict == b.super_stability.verdict);
  CHECK(a.max_generic_stress_rank == b.max_generic_stress_rank);
  REQUIRE(a.psd_stress_rank.has_value());
  REQUIRE(b.psd_stress_rank.has_value());
  CHECK(*a.psd_stress_rank == *b.psd_stress_rank);
  CHECK((a.super_stability.witness_stress->omega -
         b.super_stability.witness_stress->omega).norm() == 0.0);

  // different seeds may find different witnesses but the same verdict
  const AnalysisReport c = analyze(f, 78);
  CHECK(a.super_stability.verdict == c.super_stability.verdict);
  CHECK(*a.psd_stress_rank == *c.psd_stress_rank);
}

TEST_CASE("verdict names render for reports", "[certify]") {
  CHECK(std::string(to_string(SuperStabilityVerdict::super_stable)) ==
        "super_stable");
  CHECK(std::string(to_string(SuperStabilityVerdict::fails_conic)) ==
        "fails_conic");
  CHECK(std::string(to_string(SuperStabilityVerdict::fails_stress)) ==
        "fails_stress");
  CHECK(std::string(to_string(SuperStabilityVerdict::undetermined)) ==
        "undetermined");
}
