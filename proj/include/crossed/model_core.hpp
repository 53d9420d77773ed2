#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace crossed {

// One observed cell of the two-factor layout.
struct Cell {
  std::int32_t i = 0;  // level of factor 1 (row)
  std::int32_t j = 0;  // level of factor 2 (column)
  double y = 0.0;
};

// Sparse observation container: the indicator pattern together with the
// responses, stored in both row-major and column-major adjacency so that a
// row scan costs O(N_i.) and a column scan costs O(N_.j). Immutable after
// construction and safe to share across threads.
class ObservationSet {
 public:
  struct Entry {
    std::int32_t index;  // column index in a row scan, row index in a column scan
    double y;
  };

  ObservationSet(Eigen::Index rows, Eigen::Index cols, std::vector<Cell> cells);

  Eigen::Index rows() const { return R_; }
  Eigen::Index cols() const { return C_; }
  std::int64_t total() const { return total_; }

  std::int64_t row_count(Eigen::Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::int64_t col_count(Eigen::Index j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  std::span<const Entry> row(Eigen::Index i) const {
    return {row_adj_.data() + row_ptr_[i], static_cast<std::size_t>(row_count(i))};
  }
  std::span<const Entry> col(Eigen::Index j) const {
    return {col_adj_.data() + col_ptr_[j], static_cast<std::size_t>(col_count(j))};
  }

 private:
  Eigen::Index R_ = 0;
  Eigen::Index C_ = 0;
  std::int64_t total_ = 0;
  std::vector<std::int64_t> row_ptr_, col_ptr_;
  std::vector<Entry> row_adj_, col_adj_;
};

// Variance components of the two random effects and the error term, with the
// derived prior-to-noise ratios and precisions. All strictly positive.
class VarianceComponents {
 public:
  VarianceComponents(double sigma1_sq, double sigma2_sq, double sigmaE_sq);

  static VarianceComponents from_precisions(double tau1, double tau2, double tauE);

  double sigma1_sq() const { return sigma1_sq_; }
  double sigma2_sq() const { return sigma2_sq_; }
  double sigmaE_sq() const { return sigmaE_sq_; }
  double lambda_a() const { return sigmaE_sq_ / sigma1_sq_; }
  double lambda_b() const { return sigmaE_sq_ / sigma2_sq_; }
  double tau1() const { return 1.0 / sigma1_sq_; }
  double tau2() const { return 1.0 / sigma2_sq_; }
  double tauE() const { return 1.0 / sigmaE_sq_; }

 private:
  double sigma1_sq_, sigma2_sq_, sigmaE_sq_;
};

// Mutable chain state: global mean plus the two effect vectors. Owned by
// exactly one chain at a time.
struct LatentState {
  double a0 = 0.0;
  Eigen::VectorXd a1;  // length R
  Eigen::VectorXd a2;  // length C

  static LatentState zeros(Eigen::Index rows, Eigen::Index cols) {
    LatentState s;
    s.a1 = Eigen::VectorXd::Zero(rows);
    s.a2 = Eigen::VectorXd::Zero(cols);
    return s;
  }
};

// Per-level observation means; levels with no observations get 0, which makes
// the corresponding effect conditional collapse to its prior.
std::pair<Eigen::VectorXd, Eigen::VectorXd> level_means(const ObservationSet& obs);

// s1[i] = N_i. / (N_i. + lambda_A), s2[j] = N_.j / (N_.j + lambda_B).
std::pair<Eigen::VectorXd, Eigen::VectorXd> shrinkage_factors(const ObservationSet& obs,
                                                              const VarianceComponents& vc);

// Normalized shrinkage weights; throws if a factor has no observations at all.
std::pair<Eigen::VectorXd, Eigen::VectorXd> level_weights(const Eigen::VectorXd& s1,
                                                          const Eigen::VectorXd& s2);

}  // namespace crossed
