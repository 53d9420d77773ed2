#include <doctest.h>

#include <cmath>

#include "crossed/missingness.hpp"
#include "crossed/rng.hpp"

using namespace crossed;

TEST_CASE("regime_condition matches the triangle") {
  CHECK(regime_condition(0.52, 0.52));
  CHECK_FALSE(regime_condition(0.7, 0.7));
  CHECK(regime_condition(0.36, 0.66));  // 0.36+0.33 and 0.66+0.18 both below 1
  CHECK_THROWS(regime_condition(0.0, 0.5));
  CHECK_THROWS(regime_condition(0.5, 1.0));
  CHECK_THROWS(regime_condition(-0.1, 0.5));
}

TEST_CASE("make_pattern MCAR") {
  RegimeSpec spec;
  spec.S = 100;
  spec.rho = 0.5;
  spec.kappa = 0.5;
  spec.regime = Regime::MCAR;
  const ProbabilityPattern p = make_pattern(spec);
  CHECK(p.rows() == 10);
  CHECK(p.cols() == 10);
  CHECK(p.p.minCoeff() == 1.0);  // S/(RC) = 100/100 exactly
  CHECK(p.p.maxCoeff() == 1.0);
}

TEST_CASE("make_pattern bounded regime rejects supercritical parameters") {
  RegimeSpec spec;
  spec.S = 1000;
  spec.rho = 0.52;
  spec.kappa = 0.52;
  spec.regime = Regime::BoundedInhomogeneous;
  spec.upsilon = 1.52;
  // 1000^(-0.04) = 0.7586 so the top of the band is 1.52 * 0.7586 > 1.
  CHECK(std::pow(1000.0, -0.04) == doctest::Approx(0.758578).epsilon(1e-5));
  CHECK_THROWS_WITH_AS(make_pattern(spec), doctest::Contains("supercritical"),
                       std::invalid_argument);
}

TEST_CASE("make_pattern bounded regime band at S=10^4, rho=kappa=0.6") {
  RegimeSpec spec;
  spec.S = 10000;
  spec.rho = 0.6;
  spec.kappa = 0.6;
  spec.regime = Regime::BoundedInhomogeneous;
  spec.upsilon = 1.52;
  spec.seed = 77;
  const ProbabilityPattern p = make_pattern(spec);
  const double base = std::pow(10000.0, -0.2);
  CHECK(base == doctest::Approx(0.158489).epsilon(1e-5));
  CHECK(p.p.minCoeff() >= base);
  CHECK(p.p.maxCoeff() <= 1.52 * base * (1.0 + 1e-12));
  // Expected row sums land inside [C*min, C*max].
  const double c = static_cast<double>(p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double rs = p.p.row(i).sum();
    CHECK(rs >= c * base);
    CHECK(rs <= c * 1.52 * base);
  }
}

TEST_CASE("make_pattern almost-balanced regime meets its invariants") {
  RegimeSpec spec;
  spec.S = 10000;
  spec.rho = 0.6;
  spec.kappa = 0.6;
  spec.regime = Regime::AlmostBalanced;
  spec.upsilon = 3.0;
  spec.eps_target = 0.05;
  spec.seed = 5;
  const ProbabilityPattern p = make_pattern(spec);
  const double cell = 10000.0 / (static_cast<double>(p.rows()) * static_cast<double>(p.cols()));
  CHECK(p.p.minCoeff() >= cell / 3.0 - 1e-12);
  CHECK(p.p.maxCoeff() <= std::min(1.0, 3.0 * cell) + 1e-12);
  const double row_target = 10000.0 / static_cast<double>(p.rows());
  const double col_target = 10000.0 / static_cast<double>(p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CHECK(std::abs(p.p.row(i).sum() / row_target - 1.0) <= 0.05);
  }
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    CHECK(std::abs(p.p.col(j).sum() / col_target - 1.0) <= 0.05);
  }
}

TEST_CASE("sample_Z degenerate probabilities and determinism") {
  ProbabilityPattern ones{Eigen::MatrixXd::Constant(4, 5, 1.0), {}};
  const SparseBinaryMatrix full = sample_Z(ones, 1);
  CHECK(full.count() == 20);

  ProbabilityPattern zeros{Eigen::MatrixXd::Zero(4, 5), {}};
  CHECK(sample_Z(zeros, 1).count() == 0);

  ProbabilityPattern half{Eigen::MatrixXd::Constant(30, 30, 0.5), {}};
  const SparseBinaryMatrix a = sample_Z(half, 42);
  const SparseBinaryMatrix b = sample_Z(half, 42);
  const SparseBinaryMatrix c = sample_Z(half, 43);
  CHECK(a.ones == b.ones);
  CHECK(a.ones != c.ones);
}

TEST_CASE("sample_Z binomial mean over replications") {
  ProbabilityPattern p{Eigen::MatrixXd::Constant(50, 50, 0.3), {}};
  const int reps = 200;
  double total = 0.0;
  for (int r = 0; r < reps; ++r) {
    total += static_cast<double>(sample_Z(p, derive_seed(900, std::to_string(r))).count());
  }
  const double mean = total / reps;
  const double se = std::sqrt(2500.0 * 0.3 * 0.7 / reps);
  CHECK(std::abs(mean - 750.0) <= 3.0 * se);
}

TEST_CASE("synthesize_responses") {
  SUBCASE("vanishing variances pin y at the global mean") {
    ProbabilityPattern p{Eigen::MatrixXd::Constant(6, 6, 1.0), {}};
    const SparseBinaryMatrix z = sample_Z(p, 3);
    const VarianceComponents vc(1e-30, 1e-30, 1e-30);
    const SyntheticData data = synthesize_responses(z, vc, 2.0, 9);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (const auto& e : data.obs.row(i)) {
        CHECK(std::abs(e.y - 2.0) < 1e-12);
      }
    }
  }
  SUBCASE("unit variances, a0=2: every observed cell filled, truth returned") {
    RegimeSpec spec;
    spec.S = 1000;
    spec.rho = 0.52;
    spec.kappa = 0.52;
    spec.seed = 21;
    const ProbabilityPattern p = make_pattern(spec);
    const SparseBinaryMatrix z = sample_Z(p, 4);
    const VarianceComponents vc(1.0, 1.0, 1.0);
    const SyntheticData data = synthesize_responses(z, vc, 2.0, 10);
    CHECK(data.obs.total() == z.count());
    CHECK(data.truth.a0 == 2.0);
    CHECK(data.truth.a1.size() == z.rows);
    CHECK(data.truth.a2.size() == z.cols);
  }
  SUBCASE("variance decomposition on a large complete design") {
    ProbabilityPattern p{Eigen::MatrixXd::Constant(1500, 1500, 1.0), {}};
    const SparseBinaryMatrix z = sample_Z(p, 1);
    const VarianceComponents vc(1.0, 1.0, 1.0);
    const SyntheticData data = synthesize_responses(z, vc, 2.0, 2024);
    double sum = 0.0, sumsq = 0.0;
    for (Eigen::Index i = 0; i < 1500; ++i) {
      for (const auto& e : data.obs.row(i)) {
        const double d = e.y - 2.0;
        sum += d;
        sumsq += d * d;
      }
    }
    const double n = static_cast<double>(data.obs.total());
    const double var = sumsq / n - (sum / n) * (sum / n);
    CHECK(std::abs(var - 3.0) / 3.0 < 0.05);
  }
}
