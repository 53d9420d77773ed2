#include "crossed/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossed {

namespace {

struct CenteredSeries {
  std::vector<double> centered;
  double denom = 0.0;  // sum of squared deviations
};

CenteredSeries center(std::span<const double> series) {
  const std::size_t n = series.size();
  double mean = 0.0;
  for (const double x : series) mean += x;
  mean /= static_cast<double>(n);
  CenteredSeries out;
  out.centered.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.centered[t] = series[t] - mean;
    out.denom += out.centered[t] * out.centered[t];
  }
  return out;
}

double acf_at(const CenteredSeries& cs, std::size_t k) {
  if (k == 0) return 1.0;
  const std::size_t n = cs.centered.size();
  double s = 0.0;
  for (std::size_t t = 0; t + k < n; ++t) s += cs.centered[t] * cs.centered[t + k];
  return s / cs.denom;
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  if (max_lag < 1 || series.size() <= max_lag) {
    throw std::invalid_argument("autocorrelation: need series length > max_lag >= 1");
  }
  const CenteredSeries cs = center(series);
  if (!(cs.denom > 0.0)) throw std::runtime_error("autocorrelation: zero variance");
  std::vector<double> acf(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) acf[k] = acf_at(cs, k);
  return acf;
}

EssResult effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("effective_sample_size: need at least 10 samples");
  const CenteredSeries cs = center(series);
  if (!(cs.denom > 0.0)) throw std::runtime_error("effective_sample_size: zero variance");

  EssResult res;
  res.n = n;
  res.acf.push_back(1.0);

  // Pairwise sums acf_{2m} + acf_{2m+1}; stop at the first nonpositive one.
  double tail = 0.0;  // sum_{k>=1} acf_k over the kept pairs
  std::size_t m = 0;
  for (;; ++m) {
    const std::size_t k0 = 2 * m;
    const std::size_t k1 = 2 * m + 1;
    if (k1 >= n) {
      res.truncation_lag = k0;
      if (m > 0 && k0 < n) res.acf.push_back(acf_at(cs, k0));
      break;
    }
    const double r0 = m == 0 ? 1.0 : acf_at(cs, k0);
    const double r1 = acf_at(cs, k1);
    if (r0 + r1 <= 0.0) {
      res.truncation_lag = k0;
      if (m > 0) res.acf.push_back(r0);
      break;
    }
    if (m > 0) {
      res.acf.push_back(r0);
      tail += r0;
    }
    res.acf.push_back(r1);
    tail += r1;
  }

  const double iat = 1.0 + 2.0 * tail;
  if (iat <= 0.0) {
    res.ess = static_cast<double>(n);  // anti-correlated edge; clamp at n
  } else {
    res.ess = std::min(static_cast<double>(n), static_cast<double>(n) / iat);
  }
  return res;
}

std::vector<ParameterSummary> summarize_trace(const ChainTrace& trace) {
  const std::pair<const char*, const std::vector<double>*> params[] = {
      {"a0", &trace.a0},   {"mu1", &trace.mu1},   {"mu2", &trace.mu2},
      {"tau1", &trace.tau1}, {"tau2", &trace.tau2}, {"tauE", &trace.tauE},
  };
  std::vector<ParameterSummary> out;
  for (const auto& [name, series] : params) {
    ParameterSummary s;
    s.parameter = name;
    const std::size_t n = series->size();
    if (n > 0) {
      double mean = 0.0;
      for (const double x : *series) mean += x;
      mean /= static_cast<double>(n);
      double ssq = 0.0;
      for (const double x : *series) ssq += (x - mean) * (x - mean);
      s.mean = mean;
      s.sd = n > 1 ? std::sqrt(ssq / static_cast<double>(n - 1)) : 0.0;
    }
    try {
      EssResult ess = effective_sample_size(*series);
      ess.parameter = name;
      s.ess = std::move(ess);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace crossed
