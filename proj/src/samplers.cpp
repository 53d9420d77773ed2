#include "crossed/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace crossed {

namespace {

thread_local std::int64_t g_sweep_ops = 0;

}  // namespace

std::int64_t sweep_op_count() { return g_sweep_ops; }
void reset_sweep_op_count() { g_sweep_ops = 0; }

void SamplerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("SamplerConfig: iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::invalid_argument("SamplerConfig: burn_in must satisfy 0 <= burn_in < iterations");
  }
}

SweepWorkspace::SweepWorkspace(const ObservationSet& obs) {
  auto [y1, y2] = level_means(obs);
  ytilde1 = std::move(y1);
  ytilde2 = std::move(y2);
  s1.resize(obs.rows());
  s2.resize(obs.cols());
  t1.resize(obs.rows());
  t2.resize(obs.cols());
}

namespace {

void require_data(const ObservationSet& obs) {
  if (obs.total() == 0) throw std::invalid_argument("sweep: no observations");
}

// Fills t1[i] = (sum_j a2_j Z_ij) / N_i. and s1[i]; returns (sum s1, sum s1*(ytilde - t)).
std::pair<double, double> factor1_terms(const ObservationSet& obs, const Eigen::VectorXd& a2,
                                        double lambda_a, SweepWorkspace& ws) {
  double s_sum = 0.0;
  double num = 0.0;
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    const auto n = obs.row_count(i);
    double t = 0.0;
    for (const auto& e : obs.row(i)) t += a2[e.index];
    t = n > 0 ? t / static_cast<double>(n) : 0.0;
    ws.t1[i] = t;
    const double nd = static_cast<double>(n);
    const double s = n > 0 ? nd / (nd + lambda_a) : 0.0;
    ws.s1[i] = s;
    s_sum += s;
    num += s * (ws.ytilde1[i] - t);
  }
  g_sweep_ops += obs.total() + obs.rows();
  return {s_sum, num};
}

std::pair<double, double> factor2_terms(const ObservationSet& obs, const Eigen::VectorXd& a1,
                                        double lambda_b, SweepWorkspace& ws) {
  double s_sum = 0.0;
  double num = 0.0;
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    const auto n = obs.col_count(j);
    double t = 0.0;
    for (const auto& e : obs.col(j)) t += a1[e.index];
    t = n > 0 ? t / static_cast<double>(n) : 0.0;
    ws.t2[j] = t;
    const double nd = static_cast<double>(n);
    const double s = n > 0 ? nd / (nd + lambda_b) : 0.0;
    ws.s2[j] = s;
    s_sum += s;
    num += s * (ws.ytilde2[j] - t);
  }
  g_sweep_ops += obs.total() + obs.cols();
  return {s_sum, num};
}

void draw_factor1(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                  Rng& rng, const SweepWorkspace& ws) {
  const double s1sq = vc.sigma1_sq();
  const double sEsq = vc.sigmaE_sq();
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    const double n = static_cast<double>(obs.row_count(i));
    const double var = sEsq * s1sq / (n * s1sq + sEsq);
    const double mean = ws.s1[i] * (ws.ytilde1[i] - state.a0 - ws.t1[i]);
    state.a1[i] = rng.normal(mean, std::sqrt(var));
  }
  g_sweep_ops += obs.rows();
}

void draw_factor2(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                  Rng& rng, const SweepWorkspace& ws) {
  const double s2sq = vc.sigma2_sq();
  const double sEsq = vc.sigmaE_sq();
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    const double n = static_cast<double>(obs.col_count(j));
    const double var = sEsq * s2sq / (n * s2sq + sEsq);
    const double mean = ws.s2[j] * (ws.ytilde2[j] - state.a0 - ws.t2[j]);
    state.a2[j] = rng.normal(mean, std::sqrt(var));
  }
  g_sweep_ops += obs.cols();
}

}  // namespace

void collapsed_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                     Rng& rng, SweepWorkspace& ws) {
  require_data(obs);

  // Block 1: a0 | y, a2 then a1 | a0, y, a2.
  auto [ssum1, num1] = factor1_terms(obs, state.a2, vc.lambda_a(), ws);
  if (!(ssum1 > 0.0)) throw std::invalid_argument("collapsed_sweep: degenerate factor 1");
  state.a0 = rng.normal(num1 / ssum1, std::sqrt(vc.sigma1_sq() / ssum1));
  draw_factor1(state, obs, vc, rng, ws);

  // Block 2: a0 | y, a1 then a2 | a0, y, a1.
  auto [ssum2, num2] = factor2_terms(obs, state.a1, vc.lambda_b(), ws);
  if (!(ssum2 > 0.0)) throw std::invalid_argument("collapsed_sweep: degenerate factor 2");
  state.a0 = rng.normal(num2 / ssum2, std::sqrt(vc.sigma2_sq() / ssum2));
  draw_factor2(state, obs, vc, rng, ws);
}

void collapsed_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                     Rng& rng) {
  SweepWorkspace ws(obs);
  collapsed_sweep(state, obs, vc, rng, ws);
}

void vanilla_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                   Rng& rng, SweepWorkspace& ws) {
  require_data(obs);

  double resid_sum = 0.0;
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    for (const auto& e : obs.row(i)) {
      resid_sum += e.y - state.a1[i] - state.a2[e.index];
    }
  }
  g_sweep_ops += obs.total();
  const double n = static_cast<double>(obs.total());
  state.a0 = rng.normal(resid_sum / n, std::sqrt(vc.sigmaE_sq() / n));

  auto [ssum1, num1] = factor1_terms(obs, state.a2, vc.lambda_a(), ws);
  (void)ssum1;
  (void)num1;
  draw_factor1(state, obs, vc, rng, ws);

  auto [ssum2, num2] = factor2_terms(obs, state.a1, vc.lambda_b(), ws);
  (void)ssum2;
  (void)num2;
  draw_factor2(state, obs, vc, rng, ws);
}

void vanilla_sweep(LatentState& state, const ObservationSet& obs, const VarianceComponents& vc,
                   Rng& rng) {
  SweepWorkspace ws(obs);
  vanilla_sweep(state, obs, vc, rng, ws);
}

GammaParams precision_posterior(double sum_sq, std::int64_t count) {
  if (count <= 1) {
    throw std::invalid_argument("precision_posterior: improper posterior, need count > 1");
  }
  if (!(sum_sq > 0.0)) {
    throw std::invalid_argument("precision_posterior: zero sum of squares");
  }
  return GammaParams{0.5 * static_cast<double>(count - 1), 0.5 * sum_sq};
}

VarianceComponents precision_update(const LatentState& state, const ObservationSet& obs,
                                    Rng& rng) {
  if (obs.rows() <= 1 || obs.cols() <= 1 || obs.total() <= 1) {
    throw std::invalid_argument("precision_update: improper posterior (R, C and N must exceed 1)");
  }
  const double ss1 = state.a1.squaredNorm();
  const double ss2 = state.a2.squaredNorm();
  double rss = 0.0;
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    for (const auto& e : obs.row(i)) {
      const double r = e.y - state.a0 - state.a1[i] - state.a2[e.index];
      rss += r * r;
    }
  }
  const GammaParams g1 = precision_posterior(ss1, obs.rows());
  const GammaParams g2 = precision_posterior(ss2, obs.cols());
  const GammaParams gE = precision_posterior(rss, obs.total());
  const double tau1 = rng.gamma(g1.shape, g1.rate);
  const double tau2 = rng.gamma(g2.shape, g2.rate);
  const double tauE = rng.gamma(gE.shape, gE.rate);
  return VarianceComponents::from_precisions(tau1, tau2, tauE);
}

ChainTrace run_chain(const ObservationSet& obs, const VarianceComponents& vc0,
                     const SamplerConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "chain"));
  LatentState state = LatentState::zeros(obs.rows(), obs.cols());
  VarianceComponents vc = vc0;
  if (cfg.init == InitKind::PriorDraw) {
    const double sd1 = std::sqrt(vc.sigma1_sq());
    const double sd2 = std::sqrt(vc.sigma2_sq());
    for (Eigen::Index i = 0; i < obs.rows(); ++i) state.a1[i] = rng.normal(0.0, sd1);
    for (Eigen::Index j = 0; j < obs.cols(); ++j) state.a2[j] = rng.normal(0.0, sd2);
  }

  SweepWorkspace ws(obs);
  ChainTrace trace;
  const std::size_t kept = static_cast<std::size_t>(cfg.iterations - cfg.burn_in);
  trace.iter.reserve(kept);
  trace.a0.reserve(kept);
  trace.mu1.reserve(kept);
  trace.mu2.reserve(kept);
  trace.tau1.reserve(kept);
  trace.tau2.reserve(kept);
  trace.tauE.reserve(kept);

  for (std::int64_t t = 1; t <= cfg.iterations; ++t) {
    if (cfg.kind == SamplerKind::Collapsed) {
      collapsed_sweep(state, obs, vc, rng, ws);
    } else {
      vanilla_sweep(state, obs, vc, rng, ws);
    }
    if (!cfg.fix_precisions) {
      vc = precision_update(state, obs, rng);
    }
    if (t > cfg.burn_in) {
      trace.iter.push_back(t);
      trace.a0.push_back(state.a0);
      trace.mu1.push_back(state.a1.mean());
      trace.mu2.push_back(state.a2.mean());
      trace.tau1.push_back(vc.tau1());
      trace.tau2.push_back(vc.tau2());
      trace.tauE.push_back(vc.tauE());
    }
  }
  return trace;
}

}  // namespace crossed
