#include <catch2/catch_amalgamated.hpp>

#include <rigidity/numerics.hpp>

#include "oracles.hpp"

using namespace rigidity;

TEST_CASE("rank_nullspace on fixed matrices", "[numerics]") {
  SECTION("identity has full rank and empty nullspace") {
    const auto rn = rank_nullspace(Matrix::Identity(3, 3));
    CHECK(rn.rank == 3);
    CHECK(rn.nullspace.cols() == 0);
  }
  SECTION("all-ones 2x2 has rank one and nullspace (1,-1)/sqrt(2)") {
    const auto rn = rank_nullspace(Matrix::Ones(2, 2));
    REQUIRE(rn.rank == 1);
    REQUIRE(rn.nullspace.cols() == 1);
    const Vector expected = (Vector(2) << 1, -1).finished() / std::sqrt(2.0);
    CHECK(std::abs(std::abs(rn.nullspace.col(0).dot(expected)) - 1.0) < 1e-12);
  }
  SECTION("zero matrix has rank zero") {
    const auto rn = rank_nullspace(Matrix::Zero(2, 2));
    CHECK(rn.rank == 0);
    CHECK(rn.nullspace.cols() == 2);
  }
  SECTION("wide and tall matrices") {
    Matrix wide(1, 3);
    wide << 1, 2, 3;
    const auto rn = rank_nullspace(wide);
    CHECK(rn.rank == 1);
    CHECK(rn.nullspace.cols() == 2);
    CHECK((wide * rn.nullspace).norm() < 1e-12);
    CHECK(rank_nullspace(wide.transpose()).rank == 1);
  }
}

TEST_CASE("rank_nullspace properties on random matrices", "[numerics]") {
  std::mt19937_64 rng(7101);
  for (int round = 0; round < 100; ++round) {
    const int rows = 1 + static_cast<int>(rng() % 12);
    const int cols = 1 + static_cast<int>(rng() % 12);
    const int inner = 1 + static_cast<int>(rng() % 6);
    const Matrix m =
        oracle::random_matrix(rng, rows, inner) * oracle::random_matrix(rng, inner, cols);
    const auto rn = rank_nullspace(m);

    CHECK(rn.rank == oracle::lu_rank(m));
    CHECK(rn.rank + rn.nullspace.cols() == cols);
    if (rn.nullspace.cols() > 0) {
      CHECK((m * rn.nullspace).norm() < 1e-9 * (1.0 + m.norm()));
      const Matrix gram =
          rn.nullspace.transpose() * rn.nullspace -
          Matrix::Identity(rn.nullspace.cols(), rn.nullspace.cols());
      CHECK(gram.norm() < 1e-12);
    }
  }
}

TEST_CASE("eigen_signature on fixed matrices", "[numerics]") {
  CHECK(eigen_signature((Matrix(3, 3) << 2, 0, 0, 0, -3, 0, 0, 0, 0).finished()) ==
        SignatureTriple{1, 1, 1});
  CHECK(eigen_signature((Matrix(2, 2) << 0, 1, 1, 0).finished()) ==
        SignatureTriple{1, 0, 1});
  CHECK(eigen_signature(Matrix::Zero(4, 4)) == SignatureTriple{0, 4, 0});
  CHECK(eigen_signature(Matrix::Identity(5, 5)) == SignatureTriple{0, 0, 5});
}

TEST_CASE("eigen_signature is invariant under orthogonal congruence", "[numerics]") {
  std::mt19937_64 rng(7102);
  for (int round = 0; round < 50; ++round) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const Matrix s = oracle::random_symmetric(rng, n);
    const Matrix q = oracle::random_orthogonal(rng, n);
    CHECK(eigen_signature(s) == eigen_signature(q * s * q.transpose()));
  }
}

TEST_CASE("psd_project", "[numerics]") {
  SECTION("fixed point on PSD input") {
    std::mt19937_64 rng(7103);
    for (int round = 0; round < 30; ++round) {
      const int n = 2 + static_cast<int>(rng() % 8);
      const Matrix m = oracle::random_psd(rng, n, 1 + static_cast<int>(rng() % n));
      CHECK((psd_project(m) - m).norm() < 1e-10 * (1.0 + m.norm()));
    }
  }
  SECTION("clamps negative eigenvalues") {
    const Matrix m = (Matrix(2, 2) << 1, 0, 0, -2).finished();
    const Matrix p = psd_project(m);
    CHECK((p - (Matrix(2, 2) << 1, 0, 0, 0).finished()).norm() < 1e-12);
  }
  SECTION("result is PSD and idempotent") {
    std::mt19937_64 rng(7104);
    for (int round = 0; round < 30; ++round) {
      const int n = 2 + static_cast<int>(rng() % 8);
      const Matrix p = psd_project(oracle::random_symmetric(rng, n));
      CHECK(eigen_signature(p).negatives == 0);
      CHECK((psd_project(p) - p).norm() < 1e-10 * (1.0 + p.norm()));
    }
  }
}

TEST_CASE("sqrt_psd", "[numerics]") {
  SECTION("diagonal example") {
    const Matrix m = (Matrix(2, 2) << 4, 0, 0, 9).finished();
    CHECK((sqrt_psd(m) - (Matrix(2, 2) << 2, 0, 0, 3).finished()).norm() < 1e-12);
  }
  SECTION("identity") {
    CHECK((sqrt_psd(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)).norm() < 1e-13);
  }
  SECTION("squares back to the input") {
    std::mt19937_64 rng(7105);
    for (int round = 0; round < 100; ++round) {
      const int n = 1 + static_cast<int>(rng() % 20);
      const Matrix m = oracle::random_psd(rng, n, 1 + static_cast<int>(rng() % n));
      const Matrix r = sqrt_psd(m);
      CHECK((r * r - m).norm() < 1e-9 * (1.0 + m.norm()));
      CHECK((r - r.transpose()).norm() < 1e-12);
    }
  }
  SECTION("rejects indefinite input") {
    CHECK_THROWS_AS(sqrt_psd((Matrix(2, 2) << 1, 0, 0, -1).finished()),
                    std::invalid_argument);
  }
}

TEST_CASE("input validation", "[numerics]") {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rank_nullspace(bad), std::invalid_argument);
  CHECK_THROWS_AS(eigen_signature(bad), std::invalid_argument);
  CHECK_THROWS_AS(psd_project(bad), std::invalid_argument);
  CHECK_THROWS_AS(sqrt_psd(bad), std::invalid_argument);

  Tolerance broken;
  broken.relative_cutoff = -1.0;
  CHECK_THROWS_AS(rank_nullspace(Matrix::Identity(2, 2), broken),
                  std::invalid_argument);
  broken.relative_cutoff = 1.5;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken.relative_cutoff = 1e-9;
  broken.absolute_floor = 0.0;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  CHECK_THROWS_AS(eigen_signature(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("tolerance cutoff scales decisions consistently", "[numerics]") {
  // A matrix with singular values 1 and 1e-10 flips rank as the relative
  // cutoff crosses the gap.
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-10;
  Tolerance loose;  // default: cutoff 1e-9 > 1e-10
  CHECK(rank_nullspace(m, loose).rank == 1);
  Tolerance tight;
  tight.relative_cutoff = 1e-11;
  CHECK(rank_nullspace(m, tight).rank == 2);
}
