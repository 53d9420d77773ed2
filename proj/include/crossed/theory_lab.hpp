#pragma once

#include <cstdint>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "crossed/autoregression.hpp"
#include "crossed/missingness.hpp"
#include "crossed/model_core.hpp"

namespace crossed {

struct VerificationReport {
  std::string check;
  nlohmann::json parameters;
  double observed = 0.0;
  double bound = 0.0;
  bool bound_is_upper = true;  // pass means observed <= bound; otherwise >=
  bool pass = false;
  nlohmann::json detail;  // per-replicate table

  nlohmann::json to_json() const;
};

// exp(-2 t^2 / n), the binomial tail bound for deviation t at n trials.
double hoeffding_bound(std::int64_t n, double t);

// Samples replicate indicator matrices and compares the fraction violating the
// two-sided row/column-sum envelope
//   [(1/Upsilon' - psi) S^(1-rho), (Upsilon + psi) S^(1-rho)]  (rows; columns
// use 1-kappa) against 2R exp(-2 S^(2-kappa-2rho) psi^2) +
// 2C exp(-2 S^(2-rho-2kappa) psi^2).
VerificationReport verify_row_col_concentration(const RegimeSpec& spec, double psi,
                                                int replicates);

// ||Z||_2 <= sqrt(max_i N_i. * max_j N_.j); the norm comes from power
// iteration on the sparse operator.
VerificationReport verify_Z_norm_bound(const SparseBinaryMatrix& z);

// Runs verify_Z_norm_bound on `instances` independently sampled matrices;
// observed is the violation count and the bound is zero.
VerificationReport z_norm_bound_sweep(const RegimeSpec& spec, int instances);

// Ratio of the replicate-averaged ||Z - E(Z)||_2 to the bracket
// sqrt(Upsilon S / R) + sqrt(Upsilon S / C) + (Upsilon S)^(1/4). The absolute
// constant in front is unknown; the check asserts the ratio stays below `cap`.
VerificationReport latala_ratio(const RegimeSpec& spec, int replicates, double cap = 3.0);
VerificationReport latala_ratio(const ProbabilityPattern& pattern, std::int64_t S,
                                double upsilon, int replicates, double cap, std::uint64_t seed);

struct NormTableRow {
  std::int64_t S = 0;
  int replicate = 0;
  double norm = 0.0;
  double radius = 0.0;
};

// For each S and replicate: generate a pattern (MCAR when upsilon == 1,
// bounded-inhomogeneous otherwise), sample Z, build M, record ||M||_2 and
// rho(M). Long-format table.
std::vector<NormTableRow> norm_vs_S_experiment(double rho, double kappa, double upsilon,
                                               std::span<const std::int64_t> S_grid,
                                               int replicates, const VarianceComponents& vc,
                                               std::uint64_t seed);

// Finite-S surrogates for the three limit statements. Each checks that at
// least `confidence` of replicates land under the stated threshold.
VerificationReport mcar_contraction_surrogate(std::span<const std::int64_t> S_grid, double rho,
                                      double kappa, int replicates, const VarianceComponents& vc,
                                      std::uint64_t seed, double norm_cap = 0.5,
                                      double confidence = 0.95);
VerificationReport bounded_contraction_surrogate(std::int64_t S, double rho, double kappa, double upsilon,
                                      int replicates, const VarianceComponents& vc,
                                      std::uint64_t seed, double slack = 0.05,
                                      double confidence = 0.95);
VerificationReport balanced_contraction_surrogate(std::int64_t S, double rho, double kappa, double upsilon,
                                      double eps_target, int replicates,
                                      const VarianceComponents& vc, std::uint64_t seed,
                                      double delta = 0.01, double confidence = 0.95);

}  // namespace crossed
