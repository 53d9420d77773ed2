#include <doctest.h>

#include <cmath>

#include "crossed/theory_lab.hpp"
#include "crossed/rng.hpp"

using namespace crossed;

TEST_CASE("hoeffding_bound") {
  CHECK(hoeffding_bound(10, 0.0) == 1.0);
  CHECK(hoeffding_bound(100, 10.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS(hoeffding_bound(0, 1.0));
  CHECK_THROWS(hoeffding_bound(10, -1.0));

  // Monte-Carlo binomial tail stays under the bound.
  Rng rng(10);
  const int draws = 100000;
  int exceed = 0;
  for (int d = 0; d < draws; ++d) {
    int x = 0;
    for (int k = 0; k < 100; ++k) x += rng.uniform() < 0.5 ? 1 : 0;
    exceed += x >= 60 ? 1 : 0;
  }
  const double frac = static_cast<double>(exceed) / draws;
  const double bound = hoeffding_bound(100, 10.0);
  const double se = std::sqrt(bound * (1.0 - bound) / draws);
  CHECK(frac <= bound + 3.0 * se);
}

TEST_CASE("row/column concentration report") {
  RegimeSpec spec;
  spec.S = 10000;
  spec.rho = 0.52;
  spec.kappa = 0.52;
  spec.regime = Regime::MCAR;
  spec.seed = 314;

  SUBCASE("envelope at psi = 0.2 stays under the tail bound") {
    const VerificationReport rep = verify_row_col_concentration(spec, 0.2, 100);
    CHECK(rep.pass);
    CHECK(rep.observed <= rep.bound);
    CHECK(rep.detail.size() == 100);
  }
  SUBCASE("a huge psi makes the envelope vacuous") {
    const VerificationReport rep = verify_row_col_concentration(spec, 50.0, 20);
    CHECK(rep.observed == 0.0);
    CHECK(rep.pass);
  }
  SUBCASE("complete design sits inside a wide envelope") {
    RegimeSpec complete;
    complete.S = 100;
    complete.rho = 0.5;
    complete.kappa = 0.5;
    complete.regime = Regime::MCAR;
    const VerificationReport rep = verify_row_col_concentration(complete, 1.0, 5);
    CHECK(rep.observed == 0.0);
  }
}

TEST_CASE("Z norm bound") {
  SUBCASE("identity and all-ones equality cases") {
    SparseBinaryMatrix eye{2, 2, {{0, 0}, {1, 1}}};
    const VerificationReport a = verify_Z_norm_bound(eye);
    CHECK(a.observed == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.bound == 1.0);
    CHECK(a.pass);

    SparseBinaryMatrix ones{2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    const VerificationReport b = verify_Z_norm_bound(ones);
    CHECK(b.observed == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.bound == 2.0);
    CHECK(b.pass);
  }
  SUBCASE("sweep over random instances") {
    RegimeSpec spec;
    spec.S = 1000;
    spec.rho = 0.52;
    spec.kappa = 0.52;
    spec.seed = 2718;
    const VerificationReport rep = z_norm_bound_sweep(spec, 20);
    CHECK(rep.pass);
    CHECK(rep.observed == 0.0);
  }
  SUBCASE("empty Z is rejected") {
    CHECK_THROWS(verify_Z_norm_bound(SparseBinaryMatrix{3, 3, {}}));
  }
}

TEST_CASE("latala ratio") {
  SUBCASE("degenerate all-zero and all-one patterns give ratio zero") {
    ProbabilityPattern zeros{Eigen::MatrixXd::Zero(10, 10), {}};
    const VerificationReport a = latala_ratio(zeros, 100, 1.0, 5, 3.0, 1);
    CHECK(a.observed == 0.0);
    CHECK(a.pass);

    ProbabilityPattern ones{Eigen::MatrixXd::Constant(10, 10, 1.0), {}};
    const VerificationReport b = latala_ratio(ones, 100, 1.0, 5, 3.0, 1);
    CHECK(b.observed == 0.0);
  }
  SUBCASE("MCAR ratios stay under the cap across the S grid") {
    double prev = 10.0;
    for (const std::int64_t S : {std::int64_t{1000}, std::int64_t{3162}, std::int64_t{10000}}) {
      RegimeSpec spec;
      spec.S = S;
      spec.rho = 0.52;
      spec.kappa = 0.52;
      spec.seed = 161;
      const VerificationReport rep = latala_ratio(spec, 10, 3.0);
      CHECK(rep.pass);
      CHECK(rep.observed < 3.0);
      CHECK(rep.observed < prev + 0.15);  // nonincreasing-or-flat within noise
      prev = rep.observed;
    }
  }
}

TEST_CASE("norm_vs_S table") {
  const VarianceComponents vc(1.0, 1.0, 1.0);
  SUBCASE("complete-data degenerate entry") {
    const std::int64_t grid[] = {100};
    const auto table = norm_vs_S_experiment(0.5, 0.5, 1.0, grid, 3, vc, 5);
    REQUIRE(table.size() == 3);
    for (const auto& row : table) {
      CHECK(row.norm < 1e-12);
      CHECK(row.radius < 1e-12);
    }
  }
  SUBCASE("in-region grid keeps norms below one") {
    const std::int64_t grid[] = {1000, 3162};
    const auto table = norm_vs_S_experiment(0.52, 0.52, 1.0, grid, 4, vc, 6);
    CHECK(table.size() == 8);
    for (const auto& row : table) {
      CHECK(row.norm < 1.0);
      CHECK(row.radius <= row.norm + 1e-9);
    }
  }
  SUBCASE("unsorted grid is rejected") {
    const std::int64_t grid[] = {3162, 1000};
    CHECK_THROWS(norm_vs_S_experiment(0.52, 0.52, 1.0, grid, 2, vc, 6));
  }
}

TEST_CASE("regime contraction surrogates (reduced replicate smoke)") {
  const VarianceComponents vc(1.0, 1.0, 1.0);
  SUBCASE("regime 1") {
    const std::int64_t grid[] = {1000, 10000};
    const VerificationReport rep = mcar_contraction_surrogate(grid, 0.52, 0.52, 5, vc, 99);
    CHECK(rep.pass);
    CHECK(rep.observed >= 0.95);
  }
  SUBCASE("regime 2") {
    const VerificationReport rep = bounded_contraction_surrogate(10000, 0.6, 0.6, 1.52, 5, vc, 99);
    CHECK(rep.pass);
    CHECK(rep.parameters["phi_upsilon"].get<double>() >= 0.0143);
  }
  SUBCASE("regime 3") {
    const VerificationReport rep = balanced_contraction_surrogate(10000, 0.6, 0.6, 3.0, 0.05, 5, vc, 99);
    CHECK(rep.pass);
  }
}

TEST_CASE("verification reports are deterministic given seed and replicates") {
  RegimeSpec spec;
  spec.S = 2000;
  spec.rho = 0.52;
  spec.kappa = 0.52;
  spec.seed = 55;
  const VerificationReport a = verify_row_col_concentration(spec, 0.2, 10);
  const VerificationReport b = verify_row_col_concentration(spec, 0.2, 10);
  CHECK(a.to_json() == b.to_json());
}
