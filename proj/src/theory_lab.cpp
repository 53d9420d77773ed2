#include "crossed/theory_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crossed/rng.hpp"

namespace crossed {

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["parameters"] = parameters;
  j["observed"] = observed;
  j["bound"] = bound;
  j["direction"] = bound_is_upper ? "observed <= bound" : "observed >= bound";
  j["pass"] = pass;
  j["detail"] = detail;
  return j;
}

double hoeffding_bound(std::int64_t n, double t) {
  if (n < 1) throw std::invalid_argument("hoeffding_bound: n must be >= 1");
  if (!(t >= 0.0)) throw std::invalid_argument("hoeffding_bound: t must be >= 0");
  return std::exp(-2.0 * t * t / static_cast<double>(n));
}

VerificationReport verify_row_col_concentration(const RegimeSpec& spec, double psi,
                                                int replicates) {
  spec.validate();
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const double S = static_cast<double>(spec.S);
  const Eigen::Index R = spec.level_count_1();
  const Eigen::Index C = spec.level_count_2();
  // Upsilon' = Upsilon for AlmostBalanced, 1 otherwise.
  const double ups = spec.upsilon;
  const double ups_lo = spec.regime == Regime::AlmostBalanced ? spec.upsilon : 1.0;

  const double row_lo = (1.0 / ups_lo - psi) * std::pow(S, 1.0 - spec.rho);
  const double row_hi = (ups + psi) * std::pow(S, 1.0 - spec.rho);
  const double col_lo = (1.0 / ups_lo - psi) * std::pow(S, 1.0 - spec.kappa);
  const double col_hi = (ups + psi) * std::pow(S, 1.0 - spec.kappa);

  const ProbabilityPattern pattern = make_pattern(spec);
  int violations = 0;
  nlohmann::json detail = nlohmann::json::array();
  for (int rep = 0; rep < replicates; ++rep) {
    const SparseBinaryMatrix z =
        sample_Z(pattern, derive_seed(spec.seed, "concentration-rep-" + std::to_string(rep)));
    const auto rc = z.row_counts();
    const auto cc = z.col_counts();
    const auto [rmin_it, rmax_it] = std::minmax_element(rc.begin(), rc.end());
    const auto [cmin_it, cmax_it] = std::minmax_element(cc.begin(), cc.end());
    const bool violated = static_cast<double>(*rmin_it) < row_lo ||
                          static_cast<double>(*rmax_it) > row_hi ||
                          static_cast<double>(*cmin_it) < col_lo ||
                          static_cast<double>(*cmax_it) > col_hi;
    violations += violated ? 1 : 0;
    detail.push_back({{"replicate", rep},
                      {"row_min", *rmin_it},
                      {"row_max", *rmax_it},
                      {"col_min", *cmin_it},
                      {"col_max", *cmax_it},
                      {"violated", violated}});
  }

  const double row_tail = std::exp(-2.0 * std::pow(S, 2.0 - spec.kappa - 2.0 * spec.rho) * psi * psi);
  const double col_tail = std::exp(-2.0 * std::pow(S, 2.0 - spec.rho - 2.0 * spec.kappa) * psi * psi);
  const double bound = 2.0 * static_cast<double>(R) * row_tail + 2.0 * static_cast<double>(C) * col_tail;

  VerificationReport rep;
  rep.check = "row_col_concentration";
  rep.parameters = {{"S", spec.S},        {"rho", spec.rho},   {"kappa", spec.kappa},
                    {"upsilon", ups},     {"psi", psi},        {"replicates", replicates},
                    {"seed", spec.seed},  {"row_lo", row_lo},  {"row_hi", row_hi},
                    {"col_lo", col_lo},   {"col_hi", col_hi}};
  rep.observed = static_cast<double>(violations) / static_cast<double>(replicates);
  rep.bound = bound;
  rep.bound_is_upper = true;
  rep.pass = rep.observed <= rep.bound;
  rep.detail = std::move(detail);
  return rep;
}

VerificationReport verify_Z_norm_bound(const SparseBinaryMatrix& z) {
  if (z.count() == 0) throw std::invalid_argument("verify_Z_norm_bound: empty Z");
  const auto rc = z.row_counts();
  const auto cc = z.col_counts();
  const double max_row = static_cast<double>(*std::max_element(rc.begin(), rc.end()));
  const double max_col = static_cast<double>(*std::max_element(cc.begin(), cc.end()));
  const double bound = std::sqrt(max_row * max_col);
  const double norm = spectral_norm(sparse_operator(z), 1e-10, 100000);

  VerificationReport rep;
  rep.check = "z_norm_bound";
  rep.parameters = {{"rows", z.rows}, {"cols", z.cols}, {"nnz", z.count()},
                    {"max_row_count", max_row}, {"max_col_count", max_col}};
  rep.observed = norm;
  rep.bound = bound;
  rep.bound_is_upper = true;
  rep.pass = norm <= bound * (1.0 + 1e-9) + 1e-12;
  rep.detail = nlohmann::json::array();
  return rep;
}

VerificationReport z_norm_bound_sweep(const RegimeSpec& spec, int instances) {
  spec.validate();
  if (instances < 1) throw std::invalid_argument("instances must be >= 1");
  const ProbabilityPattern pattern = make_pattern(spec);
  int violations = 0;
  nlohmann::json detail = nlohmann::json::array();
  for (int k = 0; k < instances; ++k) {
    const SparseBinaryMatrix z =
        sample_Z(pattern, derive_seed(spec.seed, "z-norm-instance-" + std::to_string(k)));
    if (z.count() == 0) continue;  // nothing to bound
    const VerificationReport one = verify_Z_norm_bound(z);
    violations += one.pass ? 0 : 1;
    detail.push_back({{"instance", k}, {"norm", one.observed}, {"bound", one.bound}});
  }

  VerificationReport rep;
  rep.check = "z_norm_bound_sweep";
  rep.parameters = {{"S", spec.S},       {"rho", spec.rho},      {"kappa", spec.kappa},
                    {"upsilon", spec.upsilon}, {"instances", instances}, {"seed", spec.seed}};
  rep.observed = violations;
  rep.bound = 0.0;
  rep.bound_is_upper = true;
  rep.pass = violations == 0;
  rep.detail = std::move(detail);
  return rep;
}

VerificationReport latala_ratio(const ProbabilityPattern& pattern, std::int64_t S, double upsilon,
                                int replicates, double cap, std::uint64_t seed) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const Eigen::Index R = pattern.rows();
  const Eigen::Index C = pattern.cols();
  const double Sd = static_cast<double>(S);
  const double bracket = std::sqrt(upsilon * Sd / static_cast<double>(R)) +
                         std::sqrt(upsilon * Sd / static_cast<double>(C)) +
                         std::pow(upsilon * Sd, 0.25);

  double norm_sum = 0.0;
  nlohmann::json detail = nlohmann::json::array();
  for (int rep = 0; rep < replicates; ++rep) {
    const SparseBinaryMatrix z =
        sample_Z(pattern, derive_seed(seed, "latala-rep-" + std::to_string(rep)));
    Eigen::MatrixXd centered = -pattern.p;
    for (const auto& [i, j] : z.ones) centered(i, j) += 1.0;
    const double norm = spectral_norm(centered);
    norm_sum += norm;
    detail.push_back({{"replicate", rep}, {"norm", norm}});
  }
  const double mean_norm = norm_sum / static_cast<double>(replicates);

  VerificationReport rep;
  rep.check = "latala_ratio";
  rep.parameters = {{"S", S},       {"rows", R},          {"cols", C},
                    {"upsilon", upsilon}, {"replicates", replicates}, {"cap", cap},
                    {"bracket", bracket}, {"mean_norm", mean_norm}};
  rep.observed = bracket > 0.0 ? mean_norm / bracket : 0.0;
  rep.bound = cap;
  rep.bound_is_upper = true;
  rep.pass = rep.observed <= cap;
  rep.detail = std::move(detail);
  return rep;
}

VerificationReport latala_ratio(const RegimeSpec& spec, int replicates, double cap) {
  spec.validate();
  const ProbabilityPattern pattern = make_pattern(spec);
  VerificationReport rep =
      latala_ratio(pattern, spec.S, spec.upsilon, replicates, cap, spec.seed);
  rep.parameters["rho"] = spec.rho;
  rep.parameters["kappa"] = spec.kappa;
  rep.parameters["seed"] = spec.seed;
  return rep;
}

std::vector<NormTableRow> norm_vs_S_experiment(double rho, double kappa, double upsilon,
                                               std::span<const std::int64_t> S_grid,
                                               int replicates, const VarianceComponents& vc,
                                               std::uint64_t seed) {
  if (!std::is_sorted(S_grid.begin(), S_grid.end())) {
    throw std::invalid_argument("norm_vs_S_experiment: S grid must be ascending");
  }
  std::vector<NormTableRow> table;
  for (const std::int64_t S : S_grid) {
    RegimeSpec spec;
    spec.S = S;
    spec.rho = rho;
    spec.kappa = kappa;
    spec.regime = upsilon == 1.0 ? Regime::MCAR : Regime::BoundedInhomogeneous;
    spec.upsilon = upsilon;
    spec.seed = derive_seed(seed, "norm-vs-S-" + std::to_string(S));
    const ProbabilityPattern pattern = make_pattern(spec);
    for (int rep = 0; rep < replicates; ++rep) {
      const SparseBinaryMatrix z =
          sample_Z(pattern, derive_seed(spec.seed, "z-rep-" + std::to_string(rep)));
      const ObservationSet obs = to_observation_set(z);
      auto [m, m0] = build_M(obs, vc);
      NormTableRow row;
      row.S = S;
      row.replicate = rep;
      row.norm = spectral_norm(m);
      row.radius = spectral_radius(m);
      table.push_back(row);
    }
  }
  return table;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Fraction of replicates at the given S whose statistic stays at or below the
// threshold; statistic drawn from the norm table.
double fraction_below(const std::vector<NormTableRow>& table, std::int64_t S, bool use_radius,
                      double threshold) {
  int total = 0;
  int ok = 0;
  for (const NormTableRow& row : table) {
    if (row.S != S) continue;
    ++total;
    ok += (use_radius ? row.radius : row.norm) <= threshold ? 1 : 0;
  }
  return total > 0 ? static_cast<double>(ok) / static_cast<double>(total) : 0.0;
}

}  // namespace

VerificationReport mcar_contraction_surrogate(std::span<const std::int64_t> S_grid, double rho,
                                      double kappa, int replicates, const VarianceComponents& vc,
                                      std::uint64_t seed, double norm_cap, double confidence) {
  const std::vector<NormTableRow> table =
      norm_vs_S_experiment(rho, kappa, 1.0, S_grid, replicates, vc, seed);
  const std::int64_t S_max = S_grid.back();
  const double frac = fraction_below(table, S_max, /*use_radius=*/false, norm_cap);

  std::vector<double> medians;
  nlohmann::json detail = nlohmann::json::array();
  for (const std::int64_t S : S_grid) {
    std::vector<double> norms;
    for (const NormTableRow& row : table) {
      if (row.S == S) norms.push_back(row.norm);
    }
    medians.push_back(median(norms));
    detail.push_back({{"S", S}, {"median_norm", medians.back()}});
  }
  bool nonincreasing = true;
  for (std::size_t k = 1; k < medians.size(); ++k) {
    nonincreasing = nonincreasing && medians[k] <= medians[k - 1];
  }

  VerificationReport rep;
  rep.check = "mcar_contraction_surrogate";
  rep.parameters = {{"rho", rho},   {"kappa", kappa},       {"replicates", replicates},
                    {"seed", seed}, {"norm_cap", norm_cap}, {"confidence", confidence},
                    {"S_grid", std::vector<std::int64_t>(S_grid.begin(), S_grid.end())}};
  rep.observed = frac;
  rep.bound = confidence;
  rep.bound_is_upper = false;
  rep.pass = frac >= confidence && nonincreasing;
  detail.push_back({{"medians_nonincreasing", nonincreasing}});
  rep.detail = std::move(detail);
  return rep;
}

namespace {

VerificationReport radius_fraction_report(const char* name, const RegimeSpec& spec,
                                          int replicates, const VarianceComponents& vc,
                                          double threshold, double confidence) {
  const ProbabilityPattern pattern = make_pattern(spec);
  int ok = 0;
  nlohmann::json detail = nlohmann::json::array();
  for (int rep = 0; rep < replicates; ++rep) {
    const SparseBinaryMatrix z =
        sample_Z(pattern, derive_seed(spec.seed, "surrogate-rep-" + std::to_string(rep)));
    const ObservationSet obs = to_observation_set(z);
    auto [m, m0] = build_M(obs, vc);
    const double radius = spectral_radius(m);
    ok += radius <= threshold ? 1 : 0;
    detail.push_back({{"replicate", rep}, {"radius", radius}});
  }
  const double frac = static_cast<double>(ok) / static_cast<double>(replicates);

  VerificationReport rep;
  rep.check = name;
  rep.parameters = {{"S", spec.S},           {"rho", spec.rho},
                    {"kappa", spec.kappa},   {"upsilon", spec.upsilon},
                    {"replicates", replicates}, {"seed", spec.seed},
                    {"radius_threshold", threshold}, {"confidence", confidence}};
  rep.observed = frac;
  rep.bound = confidence;
  rep.bound_is_upper = false;
  rep.pass = frac >= confidence;
  rep.detail = std::move(detail);
  return rep;
}

}  // namespace

VerificationReport bounded_contraction_surrogate(std::int64_t S, double rho, double kappa, double upsilon,
                                      int replicates, const VarianceComponents& vc,
                                      std::uint64_t seed, double slack, double confidence) {
  RegimeSpec spec;
  spec.S = S;
  spec.rho = rho;
  spec.kappa = kappa;
  spec.regime = Regime::BoundedInhomogeneous;
  spec.upsilon = upsilon;
  spec.seed = seed;
  const double threshold = 1.0 - phi_upsilon(upsilon) + slack;
  VerificationReport rep =
      radius_fraction_report("bounded_contraction_surrogate", spec, replicates, vc, threshold, confidence);
  rep.parameters["phi_upsilon"] = phi_upsilon(upsilon);
  rep.parameters["slack"] = slack;
  return rep;
}

VerificationReport balanced_contraction_surrogate(std::int64_t S, double rho, double kappa, double upsilon,
                                      double eps_target, int replicates,
                                      const VarianceComponents& vc, std::uint64_t seed,
                                      double delta, double confidence) {
  RegimeSpec spec;
  spec.S = S;
  spec.rho = rho;
  spec.kappa = kappa;
  spec.regime = Regime::AlmostBalanced;
  spec.upsilon = upsilon;
  spec.eps_target = eps_target;
  spec.seed = seed;
  VerificationReport rep = radius_fraction_report("balanced_contraction_surrogate", spec, replicates, vc,
                                                  1.0 - delta, confidence);
  rep.parameters["eps_target"] = eps_target;
  rep.parameters["delta"] = delta;
  return rep;
}

}  // namespace crossed
