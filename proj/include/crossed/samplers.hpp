#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "crossed/model_core.hpp"
#include "crossed/rng.hpp"

namespace crossed {

class Rng;

enum class SamplerKind { Vanilla, Collapsed };
enum class InitKind { Zeros, PriorDraw };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::Collapsed;
  std::int64_t iterations = 10000;
  std::int64_t burn_in = 1000;
  bool fix_precisions = true;
  std::uint64_t seed = 0;
  InitKind init = InitKind::Zeros;

  void validate() const;
};

// Per-iteration scalar summaries recorded after burn-in.
struct ChainTrace {
  std::vector<std::int64_t> iter;
  std::vector<double> a0, mu1, mu2, tau1, tau2, tauE;

  std::size_t size() const { return a0.size(); }
};

// Scratch buffers plus the data-only level means, reused across sweeps so a
// sweep allocates nothing.
struct SweepWorkspace {
  explicit SweepWorkspace(const ObservationSet& obs);
  Eigen::VectorXd ytilde1, ytilde2;  // cached level means of the data
  Eigen::VectorXd s1, s2, t1, t2;
};

// One sweep of the collapsed sampler: the global mean is redrawn from its
// marginal against the opposite factor before each effect block, so the
// effects never condition on a stale a0. Work is O(N + R + C).
void collapsed_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                     Rng& rng);
void collapsed_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                     Rng& rng, SweepWorkspace& ws);

// One sweep of the plain Gibbs sampler: a0 from its full conditional given
// both effect vectors (flat prior), then each effect block with a0 held fixed.
void vanilla_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                   Rng& rng);
void vanilla_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                   Rng& rng, SweepWorkspace& ws);

struct GammaParams {
  double shape = 0.0;
  double rate = 0.0;
};

// Posterior of a precision under the flat prior on tau^(-1/2):
// Gamma((count-1)/2, sum_sq/2).
GammaParams precision_posterior(double sum_sq, std::int64_t count);

// Draws (tau1, tau2, tauE) from their conditionals given the current state.
VarianceComponents precision_update(const LatentState& state, const ObservationSet& obs, Rng& rng);

// Runs a seeded chain and records the trace after burn-in.
ChainTrace run_chain(const ObservationSet& obs, const VarianceComponents& vc0,
                     const SamplerConfig& cfg);

// Cost instrumentation: cells and levels touched by sweeps on this thread.
std::int64_t sweep_op_count();
void reset_sweep_op_count();

}  // namespace crossed
