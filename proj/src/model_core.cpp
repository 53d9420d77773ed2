#include "crossed/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crossed {

ObservationSet::ObservationSet(Eigen::Index rows, Eigen::Index cols, std::vector<Cell> cells)
    : R_(rows), C_(cols), total_(static_cast<std::int64_t>(cells.size())) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ObservationSet: needs at least one level per factor");
  }
  for (const Cell& c : cells) {
    if (c.i < 0 || c.i >= rows || c.j < 0 || c.j >= cols) {
      throw std::invalid_argument("ObservationSet: cell index out of range");
    }
    if (!std::isfinite(c.y)) {
      throw std::invalid_argument("ObservationSet: non-finite response");
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (cells[k].i == cells[k - 1].i && cells[k].j == cells[k - 1].j) {
      throw std::invalid_argument("ObservationSet: duplicate cell (" +
                                  std::to_string(cells[k].i) + "," +
                                  std::to_string(cells[k].j) + ")");
    }
  }

  row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  col_ptr_.assign(static_cast<std::size_t>(cols) + 1, 0);
  for (const Cell& c : cells) {
    ++row_ptr_[static_cast<std::size_t>(c.i) + 1];
    ++col_ptr_[static_cast<std::size_t>(c.j) + 1];
  }
  for (Eigen::Index i = 0; i < rows; ++i) row_ptr_[i + 1] += row_ptr_[i];
  for (Eigen::Index j = 0; j < cols; ++j) col_ptr_[j + 1] += col_ptr_[j];

  row_adj_.resize(cells.size());
  col_adj_.resize(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    row_adj_[k] = Entry{cells[k].j, cells[k].y};  // cells already row-major sorted
  }
  std::vector<std::int64_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (const Cell& c : cells) {
    col_adj_[static_cast<std::size_t>(fill[c.j]++)] = Entry{c.i, c.y};
  }
}

VarianceComponents::VarianceComponents(double sigma1_sq, double sigma2_sq, double sigmaE_sq)
    : sigma1_sq_(sigma1_sq), sigma2_sq_(sigma2_sq), sigmaE_sq_(sigmaE_sq) {
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0) || !(sigmaE_sq > 0.0)) {
    throw std::invalid_argument("VarianceComponents: variances must be strictly positive");
  }
}

VarianceComponents VarianceComponents::from_precisions(double tau1, double tau2, double tauE) {
  if (!(tau1 > 0.0) || !(tau2 > 0.0) || !(tauE > 0.0)) {
    throw std::invalid_argument("VarianceComponents: precisions must be strictly positive");
  }
  return VarianceComponents(1.0 / tau1, 1.0 / tau2, 1.0 / tauE);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> level_means(const ObservationSet& obs) {
  Eigen::VectorXd ytilde1 = Eigen::VectorXd::Zero(obs.rows());
  Eigen::VectorXd ytilde2 = Eigen::VectorXd::Zero(obs.cols());
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    const auto n = obs.row_count(i);
    if (n == 0) continue;
    double sum = 0.0;
    for (const auto& e : obs.row(i)) sum += e.y;
    ytilde1[i] = sum / static_cast<double>(n);
  }
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    const auto n = obs.col_count(j);
    if (n == 0) continue;
    double sum = 0.0;
    for (const auto& e : obs.col(j)) sum += e.y;
    ytilde2[j] = sum / static_cast<double>(n);
  }
  return {std::move(ytilde1), std::move(ytilde2)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> shrinkage_factors(const ObservationSet& obs,
                                                              const VarianceComponents& vc) {
  Eigen::VectorXd s1(obs.rows()), s2(obs.cols());
  const double lamA = vc.lambda_a();
  const double lamB = vc.lambda_b();
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    const double n = static_cast<double>(obs.row_count(i));
    s1[i] = n > 0.0 ? n / (n + lamA) : 0.0;
  }
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    const double n = static_cast<double>(obs.col_count(j));
    s2[j] = n > 0.0 ? n / (n + lamB) : 0.0;
  }
  return {std::move(s1), std::move(s2)};
}

namespace {

Eigen::VectorXd normalize_weights(const Eigen::VectorXd& s) {
  const double sum = s.sum();
  if (!(sum > 0.0)) {
    throw std::invalid_argument("level_weights: degenerate factor (no observations)");
  }
  // Constant shrinkage (balanced levels) gives exactly uniform weights.
  if (s.minCoeff() == s.maxCoeff()) {
    return Eigen::VectorXd::Constant(s.size(), 1.0 / static_cast<double>(s.size()));
  }
  return s / sum;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> level_weights(const Eigen::VectorXd& s1,
                                                          const Eigen::VectorXd& s2) {
  return {normalize_weights(s1), normalize_weights(s2)};
}

}  // namespace crossed
