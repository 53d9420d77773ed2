#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossed/samplers.hpp"

namespace crossed {

// Biased normalized autocorrelation estimates for lags 0..max_lag (acf[0] = 1).
// Requires series length > max_lag >= 1; throws on a constant series.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

struct EssResult {
  std::string parameter;
  std::size_t n = 0;   // post-burn-in samples
  double ess = 0.0;    // clamped to (0, n]
  std::size_t truncation_lag = 0;  // first even lag excluded by the pairwise rule
  std::vector<double> acf;         // lags 0..truncation_lag (where computable)
};

// ESS = n / (1 + 2 sum_{k=1}^{K} acf_k), truncating at the first nonpositive
// pairwise sum acf_{2m} + acf_{2m+1} (Geyer initial positive sequence).
// Requires length >= 10; throws on zero variance.
EssResult effective_sample_size(std::span<const double> series);

struct ParameterSummary {
  std::string parameter;
  double mean = 0.0;
  double sd = 0.0;
  std::optional<EssResult> ess;  // absent when the estimator failed
  std::string error;             // reason when absent
};

// Mean, SD and ESS for each recorded parameter of a trace.
std::vector<ParameterSummary> summarize_trace(const ChainTrace& trace);

}  // namespace crossed
