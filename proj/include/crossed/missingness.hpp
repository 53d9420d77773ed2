#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "crossed/model_core.hpp"

namespace crossed {

enum class Regime {
  MCAR,                  // homogeneous cell probability S/(RC)
  BoundedInhomogeneous,  // p_ij = U_ij * S^(1-rho-kappa), U_ij ~ U[1, Upsilon]
  AlmostBalanced,        // arbitrary Upsilon with near-balanced row/column sums
};

// Parameters of a synthetic missingness pattern indexed by problem size S,
// with R = ceil(S^rho) row levels and C = ceil(S^kappa) column levels.
struct RegimeSpec {
  std::int64_t S = 0;
  double rho = 0.5;
  double kappa = 0.5;
  Regime regime = Regime::MCAR;
  double upsilon = 1.0;      // inhomogeneity level, >= 1
  double eps_target = 0.05;  // balance tolerance for AlmostBalanced, in (0, 0.25)
  std::uint64_t seed = 0;

  Eigen::Index level_count_1() const;  // R
  Eigen::Index level_count_2() const;  // C
  void validate() const;
};

// True iff rho + kappa/2 < 1 and kappa + rho/2 < 1 (both strict); throws when
// either exponent is outside (0, 1).
bool regime_condition(double rho, double kappa);

// Dense matrix of cell probabilities; `spec` carries regime metadata when the
// pattern came out of make_pattern.
struct ProbabilityPattern {
  Eigen::MatrixXd p;
  std::optional<RegimeSpec> spec;

  Eigen::Index rows() const { return p.rows(); }
  Eigen::Index cols() const { return p.cols(); }
};

// Builds the pattern for the requested regime. Throws "supercritical density"
// when the construction would need a cell probability above 1, and reports the
// achieved imbalance if the AlmostBalanced scaling loop fails to converge.
ProbabilityPattern make_pattern(const RegimeSpec& spec);

// A sampled indicator matrix, as a triplet list of observed cells.
struct SparseBinaryMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> ones;

  std::int64_t count() const { return static_cast<std::int64_t>(ones.size()); }
  std::vector<std::int64_t> row_counts() const;
  std::vector<std::int64_t> col_counts() const;
};

// Independent Bernoulli draws, deterministic given the seed.
SparseBinaryMatrix sample_Z(const ProbabilityPattern& pattern, std::uint64_t seed);

// Observation set over the given cells with a constant placeholder response,
// for consumers that only need the pattern.
ObservationSet to_observation_set(const SparseBinaryMatrix& z, double fill_y = 0.0);

struct SyntheticData {
  ObservationSet obs;
  LatentState truth;  // the effects and global mean that generated the data
};

// Draws effects and noise from the model and fills responses at the observed
// cells: y_ij = a0_true + a1_i + a2_j + e_ij.
SyntheticData synthesize_responses(const SparseBinaryMatrix& z, const VarianceComponents& vc,
                                   double a0_true, std::uint64_t seed);

}  // namespace crossed
