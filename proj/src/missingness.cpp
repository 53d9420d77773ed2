#include "crossed/missingness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "crossed/rng.hpp"

namespace crossed {

Eigen::Index RegimeSpec::level_count_1() const {
  return static_cast<Eigen::Index>(std::ceil(std::pow(static_cast<double>(S), rho)));
}

Eigen::Index RegimeSpec::level_count_2() const {
  return static_cast<Eigen::Index>(std::ceil(std::pow(static_cast<double>(S), kappa)));
}

void RegimeSpec::validate() const {
  if (S < 1) throw std::invalid_argument("RegimeSpec: S must be positive");
  if (!(rho > 0.0 && rho < 1.0) || !(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("RegimeSpec: exponents must lie in (0, 1)");
  }
  if (!(upsilon >= 1.0)) throw std::invalid_argument("RegimeSpec: upsilon must be >= 1");
  if (regime == Regime::AlmostBalanced && !(eps_target > 0.0 && eps_target < 0.25)) {
    throw std::invalid_argument("RegimeSpec: eps_target must lie in (0, 0.25)");
  }
}

bool regime_condition(double rho, double kappa) {
  if (!(rho > 0.0 && rho < 1.0) || !(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("regime_condition: exponents must lie in (0, 1)");
  }
  return rho + 0.5 * kappa < 1.0 && kappa + 0.5 * rho < 1.0;
}

namespace {

// Sinkhorn-style alternating row/column scaling toward target sums S/R and
// S/C, clamping entries back into the admissible band after every sweep.
void scale_to_balance(Eigen::MatrixXd& p, double row_target, double col_target, double lo,
                      double hi, double eps_target) {
  constexpr int kMaxSweeps = 500;
  const auto R = p.rows();
  const auto C = p.cols();
  double achieved = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (Eigen::Index i = 0; i < R; ++i) {
      const double rs = p.row(i).sum();
      if (rs > 0.0) p.row(i) *= row_target / rs;
    }
    p = p.cwiseMax(lo).cwiseMin(hi);
    for (Eigen::Index j = 0; j < C; ++j) {
      const double cs = p.col(j).sum();
      if (cs > 0.0) p.col(j) *= col_target / cs;
    }
    p = p.cwiseMax(lo).cwiseMin(hi);

    achieved = 0.0;
    for (Eigen::Index i = 0; i < R; ++i) {
      achieved = std::max(achieved, std::abs(p.row(i).sum() / row_target - 1.0));
    }
    for (Eigen::Index j = 0; j < C; ++j) {
      achieved = std::max(achieved, std::abs(p.col(j).sum() / col_target - 1.0));
    }
    if (achieved <= eps_target * (1.0 - 1e-6)) return;
  }
  throw std::runtime_error("make_pattern: balance scaling did not converge, achieved eps=" +
                           std::to_string(achieved) + " target=" + std::to_string(eps_target));
}

}  // namespace

ProbabilityPattern make_pattern(const RegimeSpec& spec) {
  spec.validate();
  const Eigen::Index R = spec.level_count_1();
  const Eigen::Index C = spec.level_count_2();
  const double S = static_cast<double>(spec.S);
  const double cell_rate = S / (static_cast<double>(R) * static_cast<double>(C));

  ProbabilityPattern out;
  out.spec = spec;

  switch (spec.regime) {
    case Regime::MCAR: {
      if (cell_rate > 1.0) {
        throw std::invalid_argument("make_pattern: supercritical density, S/(RC)=" +
                                    std::to_string(cell_rate));
      }
      out.p = Eigen::MatrixXd::Constant(R, C, cell_rate);
      break;
    }
    case Regime::BoundedInhomogeneous: {
      const double base = std::pow(S, 1.0 - spec.rho - spec.kappa);
      if (spec.upsilon * base > 1.0) {
        throw std::invalid_argument("make_pattern: supercritical density, Upsilon*S^(1-rho-kappa)=" +
                                    std::to_string(spec.upsilon * base));
      }
      Rng rng(derive_seed(spec.seed, "pattern"));
      out.p.resize(R, C);
      for (Eigen::Index i = 0; i < R; ++i) {
        for (Eigen::Index j = 0; j < C; ++j) {
          const double u = 1.0 + (spec.upsilon - 1.0) * rng.uniform();
          out.p(i, j) = u * base;
        }
      }
      break;
    }
    case Regime::AlmostBalanced: {
      if (cell_rate > 1.0) {
        throw std::invalid_argument("make_pattern: supercritical density, S/(RC)=" +
                                    std::to_string(cell_rate));
      }
      const double lo = cell_rate / spec.upsilon;
      const double hi = std::min(1.0, spec.upsilon * cell_rate);
      Rng rng(derive_seed(spec.seed, "pattern"));
      out.p.resize(R, C);
      for (Eigen::Index i = 0; i < R; ++i) {
        for (Eigen::Index j = 0; j < C; ++j) {
          const double u = lo + (spec.upsilon * cell_rate - lo) * rng.uniform();
          out.p(i, j) = std::min(u, hi);
        }
      }
      scale_to_balance(out.p, S / static_cast<double>(R), S / static_cast<double>(C), lo, hi,
                       spec.eps_target);
      break;
    }
  }
  return out;
}

std::vector<std::int64_t> SparseBinaryMatrix::row_counts() const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(rows), 0);
  for (const auto& [i, j] : ones) ++counts[static_cast<std::size_t>(i)];
  return counts;
}

std::vector<std::int64_t> SparseBinaryMatrix::col_counts() const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cols), 0);
  for (const auto& [i, j] : ones) ++counts[static_cast<std::size_t>(j)];
  return counts;
}

SparseBinaryMatrix sample_Z(const ProbabilityPattern& pattern, std::uint64_t seed) {
  SparseBinaryMatrix z;
  z.rows = pattern.rows();
  z.cols = pattern.cols();
  Rng rng(seed);
  for (Eigen::Index i = 0; i < z.rows; ++i) {
    for (Eigen::Index j = 0; j < z.cols; ++j) {
      if (rng.uniform() < pattern.p(i, j)) {
        z.ones.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
      }
    }
  }
  return z;
}

ObservationSet to_observation_set(const SparseBinaryMatrix& z, double fill_y) {
  std::vector<Cell> cells;
  cells.reserve(z.ones.size());
  for (const auto& [i, j] : z.ones) cells.push_back(Cell{i, j, fill_y});
  return ObservationSet(z.rows, z.cols, std::move(cells));
}

SyntheticData synthesize_responses(const SparseBinaryMatrix& z, const VarianceComponents& vc,
                                   double a0_true, std::uint64_t seed) {
  Rng rng(seed);
  LatentState truth;
  truth.a0 = a0_true;
  truth.a1.resize(z.rows);
  truth.a2.resize(z.cols);
  const double sd1 = std::sqrt(vc.sigma1_sq());
  const double sd2 = std::sqrt(vc.sigma2_sq());
  const double sdE = std::sqrt(vc.sigmaE_sq());
  for (Eigen::Index i = 0; i < z.rows; ++i) truth.a1[i] = rng.normal(0.0, sd1);
  for (Eigen::Index j = 0; j < z.cols; ++j) truth.a2[j] = rng.normal(0.0, sd2);

  std::vector<Cell> cells;
  cells.reserve(z.ones.size());
  for (const auto& [i, j] : z.ones) {
    const double y = a0_true + truth.a1[i] + truth.a2[j] + rng.normal(0.0, sdE);
    cells.push_back(Cell{i, j, y});
  }
  return SyntheticData{ObservationSet(z.rows, z.cols, std::move(cells)), std::move(truth)};
}

}  // namespace crossed
