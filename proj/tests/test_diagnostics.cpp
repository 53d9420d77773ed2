#include <doctest.h>

#include <cmath>
#include <vector>

#include "crossed/diagnostics.hpp"
#include "crossed/missingness.hpp"
#include "support/oracles.hpp"

using namespace crossed;

TEST_CASE("autocorrelation") {
  SUBCASE("lag zero is one; iid lag one is small") {
    Rng rng(17);
    std::vector<double> x(100000);
    for (double& v : x) v = rng.normal();
    const auto acf = autocorrelation(x, 5);
    CHECK(acf[0] == 1.0);
    CHECK(std::abs(acf[1]) < 4.0 / std::sqrt(100000.0));
  }
  SUBCASE("AR(1) coefficient shows up at lag one") {
    const auto x = oracle::ar1_series(0.8, 100000, 7);
    const auto acf = autocorrelation(x, 3);
    CHECK(std::abs(acf[1] - 0.8) < 0.02);
  }
  SUBCASE("matches the brute-force double loop on short series") {
    Rng rng(3);
    std::vector<double> x(180);
    for (double& v : x) v = rng.normal() + 0.2 * rng.uniform();
    const auto acf = autocorrelation(x, 20);
    for (std::size_t k = 0; k <= 20; ++k) {
      CHECK(acf[k] == doctest::Approx(oracle::acf_brute(x, k)).epsilon(1e-12));
    }
  }
  SUBCASE("error paths") {
    std::vector<double> constant(50, 2.0);
    CHECK_THROWS(autocorrelation(constant, 5));
    std::vector<double> tiny = {1.0, 2.0};
    CHECK_THROWS(autocorrelation(tiny, 2));  // max_lag >= length
    CHECK_THROWS(autocorrelation(tiny, 0));
  }
}

TEST_CASE("effective_sample_size") {
  SUBCASE("iid series is close to n") {
    Rng rng(11);
    std::vector<double> x(10000);
    for (double& v : x) v = rng.normal();
    const EssResult r = effective_sample_size(x);
    CHECK(r.ess >= 0.8 * 10000.0);
    CHECK(r.ess <= 10000.0);
    CHECK(r.truncation_lag % 2 == 0);
  }
  SUBCASE("AR(1) with coefficient 0.9 has ESS near n/19") {
    const auto x = oracle::ar1_series(0.9, 100000, 23);
    const EssResult r = effective_sample_size(x);
    const double target = 100000.0 * (1.0 - 0.9) / (1.0 + 0.9);
    CHECK(std::abs(r.ess - target) / target < 0.15);
  }
  SUBCASE("perfectly alternating series clamps at n") {
    // The biased acf gives rho_1 = -(n-1)/n, so every pairwise sum stays
    // marginally positive and the anti-correlated sum drives n/iat above n.
    std::vector<double> x(1000);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = t % 2 == 0 ? 1.0 : -1.0;
    const EssResult r = effective_sample_size(x);
    CHECK(r.ess == 1000.0);
    CHECK(r.truncation_lag % 2 == 0);
  }
  SUBCASE("affine invariance") {
    const auto x = oracle::ar1_series(0.6, 20000, 5);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = -3.75 * x[t] + 11.0;
    const EssResult rx = effective_sample_size(x);
    const EssResult ry = effective_sample_size(y);
    CHECK(std::abs(rx.ess - ry.ess) / rx.ess < 1e-10);
    CHECK(rx.truncation_lag == ry.truncation_lag);
  }
  SUBCASE("error paths") {
    std::vector<double> x(9, 1.5);
    CHECK_THROWS(effective_sample_size(x));  // too short
    std::vector<double> constant(100, 1.5);
    CHECK_THROWS(effective_sample_size(constant));  // zero variance
  }
}

TEST_CASE("summarize_trace") {
  SUBCASE("length-one trace reports an error per parameter") {
    ChainTrace t;
    t.iter = {1};
    t.a0 = {0.5};
    t.mu1 = {0.1};
    t.mu2 = {0.2};
    t.tau1 = {1.0};
    t.tau2 = {1.0};
    t.tauE = {1.0};
    const auto summaries = summarize_trace(t);
    CHECK(summaries.size() == 6);
    for (const auto& s : summaries) {
      CHECK_FALSE(s.ess.has_value());
      CHECK_FALSE(s.error.empty());
    }
  }
  SUBCASE("a0 trace mean lands within three posterior SDs of the true global mean") {
    RegimeSpec spec;
    spec.S = 2000;
    spec.rho = 0.52;
    spec.kappa = 0.52;
    spec.seed = 41;
    const SparseBinaryMatrix z = sample_Z(make_pattern(spec), derive_seed(41, "z"));
    const VarianceComponents vc(1.0, 1.0, 1.0);
    const SyntheticData data = synthesize_responses(z, vc, 2.0, derive_seed(41, "y"));
    SamplerConfig cfg;
    cfg.kind = SamplerKind::Collapsed;
    cfg.iterations = 4000;
    cfg.burn_in = 500;
    cfg.fix_precisions = false;
    cfg.seed = 17;
    const ChainTrace trace = run_chain(data.obs, vc, cfg);
    const auto summaries = summarize_trace(trace);
    REQUIRE(summaries[0].parameter == "a0");
    CHECK(std::abs(summaries[0].mean - 2.0) <= 3.0 * summaries[0].sd);
  }
  SUBCASE("stationary chains produce finite ESS and a zero-variance note for fixed taus") {
    ChainTrace t;
    Rng rng(9);
    for (int k = 0; k < 500; ++k) {
      t.iter.push_back(k + 1);
      t.a0.push_back(2.0 + rng.normal());
      t.mu1.push_back(rng.normal());
      t.mu2.push_back(rng.normal());
      t.tau1.push_back(1.0);  // fixed-precision run
      t.tau2.push_back(1.0);
      t.tauE.push_back(1.0);
    }
    const auto summaries = summarize_trace(t);
    CHECK(summaries[0].ess.has_value());
    CHECK(summaries[0].ess->ess > 100.0);
    CHECK(std::abs(summaries[0].mean - 2.0) < 0.2);
    CHECK_FALSE(summaries[3].ess.has_value());  // constant tau1
  }
}
