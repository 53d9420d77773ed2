#include "crossed/autoregression.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "crossed/rng.hpp"

namespace crossed {

LinearOperator sparse_operator(const SparseBinaryMatrix& z) {
  auto cells = std::make_shared<std::vector<std::pair<std::int32_t, std::int32_t>>>(z.ones);
  LinearOperator op;
  op.rows = z.rows;
  op.cols = z.cols;
  op.apply = [cells, rows = z.rows](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
    for (const auto& [i, j] : *cells) y[i] += x[j];
    return y;
  };
  op.apply_t = [cells, cols = z.cols](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
    for (const auto& [i, j] : *cells) y[j] += x[i];
    return y;
  };
  return op;
}

namespace {

struct LevelTerms {
  Eigen::VectorXd d1, d2;  // 1/(N_i. + lambda_A), 1/(N_.j + lambda_B)
  Eigen::VectorXd w1, w2;
};

LevelTerms level_terms(const ObservationSet& obs, const VarianceComponents& vc) {
  LevelTerms t;
  t.d1.resize(obs.rows());
  t.d2.resize(obs.cols());
  const double lamA = vc.lambda_a();
  const double lamB = vc.lambda_b();
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    t.d1[i] = 1.0 / (static_cast<double>(obs.row_count(i)) + lamA);
  }
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    t.d2[j] = 1.0 / (static_cast<double>(obs.col_count(j)) + lamB);
  }
  auto [s1, s2] = shrinkage_factors(obs, vc);
  auto [w1, w2] = level_weights(s1, s2);
  t.w1 = std::move(w1);
  t.w2 = std::move(w2);
  return t;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_M(const ObservationSet& obs,
                                                    const VarianceComponents& vc) {
  const Eigen::Index R = obs.rows();
  const Eigen::Index C = obs.cols();
  const LevelTerms lt = level_terms(obs, vc);

  // u = Z^T d1 and v = Z^T w1, accumulated in ascending row order.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(C);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(C);
  for (Eigen::Index j = 0; j < C; ++j) {
    for (const auto& e : obs.col(j)) {
      u[j] += lt.d1[e.index];
      v[j] += lt.w1[e.index];
    }
  }

  // T = Z^T D1^-1 Z, one rank-one row contribution at a time.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(C, C);
  for (Eigen::Index i = 0; i < R; ++i) {
    const auto row = obs.row(i);
    const double di = lt.d1[i];
    for (const auto& ej : row) {
      for (const auto& es : row) {
        T(ej.index, es.index) += di;
      }
    }
  }

  Eigen::MatrixXd m0(C, C);
  for (Eigen::Index s = 0; s < C; ++s) {
    for (Eigen::Index j = 0; j < C; ++j) {
      m0(j, s) = lt.d2[j] * (T(j, s) - v[j] * u[s]);
    }
  }

  const Eigen::RowVectorXd colsum = m0.colwise().sum();
  Eigen::MatrixXd m = m0 - lt.w2 * colsum;
  return {std::move(m), std::move(m0)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_B1_B2(const ObservationSet& obs,
                                                        const VarianceComponents& vc) {
  const Eigen::Index R = obs.rows();
  const Eigen::Index C = obs.cols();
  const LevelTerms lt = level_terms(obs, vc);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(C);  // u_j = sum_i Z_ij / (N_i. + lambda_A)
  for (Eigen::Index j = 0; j < C; ++j) {
    for (const auto& e : obs.col(j)) u[j] += lt.d1[e.index];
  }
  Eigen::VectorXd l = Eigen::VectorXd::Zero(R);  // l_i = sum_j Z_ij / (N_.j + lambda_B)
  for (Eigen::Index i = 0; i < R; ++i) {
    for (const auto& e : obs.row(i)) l[i] += lt.d2[e.index];
  }

  Eigen::MatrixXd b1 = lt.w1 * u.transpose();
  for (Eigen::Index i = 0; i < R; ++i) {
    for (const auto& e : obs.row(i)) b1(i, e.index) -= lt.d1[i];
  }
  Eigen::MatrixXd b2 = lt.w2 * l.transpose();
  for (Eigen::Index j = 0; j < C; ++j) {
    for (const auto& e : obs.col(j)) b2(j, e.index) -= lt.d2[j];
  }
  return {std::move(b1), std::move(b2)};
}

namespace {

// Power iteration on A^T A with a seeded positive start vector. Returns the
// top singular value; positive start keeps overlap with the Perron direction
// for nonnegative operators.
double power_norm(Eigen::Index cols,
                  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_t,
                  double tol, int max_iter) {
  Rng rng(0x5eedc0de5eedc0deull);
  Eigen::VectorXd v(cols);
  for (Eigen::Index k = 0; k < cols; ++k) v[k] = 0.5 + rng.uniform();
  v.normalize();

  double prev = -1.0;
  double prev2 = -1.0;
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd w = apply(v);
    sigma = w.norm();  // ||A v|| with unit v
    if (sigma == 0.0) return 0.0;
    Eigen::VectorXd z = apply_t(w);
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    v = z / zn;
    if (prev >= 0.0 && prev2 >= 0.0) {
      const double c1 = std::abs(sigma - prev);
      const double c2 = std::abs(prev - prev2);
      if (c1 <= tol * sigma && c2 <= tol * sigma) return sigma;
    }
    prev2 = prev;
    prev = sigma;
  }
  throw std::runtime_error("spectral_norm: power iteration did not converge within " +
                           std::to_string(max_iter) + " iterations; last estimate " +
                           std::to_string(sigma));
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& a, double tol, int max_iter,
                     Eigen::Index dense_cutoff) {
  if (!a.allFinite()) throw std::invalid_argument("spectral_norm: non-finite matrix");
  if (a.size() == 0) return 0.0;
  if (a.cols() <= dense_cutoff) {
    const Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("spectral_norm: dense eigensolver failed");
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  return power_norm(
      a.cols(), [&a](const Eigen::VectorXd& x) { return Eigen::VectorXd(a * x); },
      [&a](const Eigen::VectorXd& x) { return Eigen::VectorXd(a.transpose() * x); }, tol,
      max_iter);
}

double spectral_norm(const LinearOperator& op, double tol, int max_iter) {
  return power_norm(op.cols, op.apply, op.apply_t, tol, max_iter);
}

SpectralRadiusEstimate spectral_radius_estimate(const Eigen::MatrixXd& a, double tol,
                                                Eigen::Index dense_cutoff) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("spectral_radius: non-finite matrix");
  if (a.size() == 0) return {0.0, true};

  if (a.rows() <= dense_cutoff) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("spectral_radius: dense eigensolver failed");
    }
    return {es.eigenvalues().cwiseAbs().maxCoeff(), true};
  }

  // Fallback: power iteration with random restarts; may oscillate for complex
  // leading pairs, so the result is flagged approximate.
  Rng rng(0xabcdef0123456789ull);
  double best = 0.0;
  for (int restart = 0; restart < 8; ++restart) {
    Eigen::VectorXd v(a.rows());
    for (Eigen::Index k = 0; k < a.rows(); ++k) v[k] = rng.normal();
    v.normalize();
    double est = 0.0;
    double prev = -1.0;
    for (int it = 0; it < 5000; ++it) {
      Eigen::VectorXd w = a * v;
      const double wn = w.norm();
      if (wn == 0.0) {
        est = 0.0;
        break;
      }
      est = std::abs(v.dot(w));  // |Rayleigh quotient| with unit v
      v = w / wn;
      if (prev >= 0.0 && std::abs(est - prev) <= tol * std::max(est, 1e-300)) break;
      prev = est;
    }
    best = std::max(best, est);
  }
  return {best, false};
}

double spectral_radius(const Eigen::MatrixXd& a, double tol) {
  return spectral_radius_estimate(a, tol).value;
}

double relaxation_time(double spec_radius) {
  if (!(spec_radius >= 0.0)) {
    throw std::invalid_argument("relaxation_time: spectral radius must be nonnegative");
  }
  if (spec_radius >= 1.0) {
    throw std::domain_error("relaxation_time: non-geometric (spectral radius >= 1)");
  }
  return 1.0 / (1.0 - spec_radius);
}

double phi_upsilon(double u) {
  return 1.0 / (u * u * u) - (u - 1.0) * (u - 1.0);
}

Eigen::MatrixXd build_M_prime(const ProbabilityPattern& pattern, MPrimeSplit split) {
  const Eigen::Index R = pattern.rows();
  const Eigen::Index C = pattern.cols();
  const Eigen::VectorXd rbar = pattern.p.rowwise().sum();
  const Eigen::VectorXd cbar = pattern.p.colwise().sum();
  if (!(rbar.minCoeff() > 0.0) || !(cbar.minCoeff() > 0.0)) {
    throw std::invalid_argument("build_M_prime: zero expected row or column sum");
  }
  const Eigen::VectorXd sqrt_r = rbar.cwiseSqrt();
  const Eigen::VectorXd sqrt_c = cbar.cwiseSqrt();
  const Eigen::VectorXd isq_r = sqrt_r.cwiseInverse();
  const Eigen::VectorXd isq_c = sqrt_c.cwiseInverse();

  Eigen::MatrixXd g1(R, C);  // Db1^(-1/2) Zb Db2^(-1/2)
  for (Eigen::Index i = 0; i < R; ++i) {
    for (Eigen::Index j = 0; j < C; ++j) {
      g1(i, j) = pattern.p(i, j) * isq_r[i] * isq_c[j];
    }
  }

  auto factor1 = [&]() {
    const Eigen::RowVectorXd m = (isq_r.transpose() * g1) / static_cast<double>(R);
    return Eigen::MatrixXd(g1 - sqrt_r * m);
  };
  auto factor2 = [&]() {
    const Eigen::MatrixXd g2 = g1.transpose();
    const Eigen::RowVectorXd m = (isq_c.transpose() * g2) / static_cast<double>(C);
    return Eigen::MatrixXd(g2 - sqrt_c * m);
  };

  switch (split) {
    case MPrimeSplit::Factor1:
      return factor1();
    case MPrimeSplit::Factor2:
      return factor2();
    case MPrimeSplit::Full:
      return factor2() * factor1();
  }
  throw std::logic_error("build_M_prime: unreachable");
}

nlohmann::json AutoregressionBundle::to_json() const {
  nlohmann::json j;
  j["C"] = M.cols();
  j["spec_norm"] = spec_norm;
  j["spec_radius"] = spec_radius;
  j["radius_method"] = radius_dense ? "dense_eigensolver" : "power_iteration";
  j["geometric"] = geometric;
  if (geometric) {
    j["t_rel"] = t_rel;
  } else {
    j["t_rel"] = nullptr;
  }
  return j;
}

AutoregressionBundle build_bundle(const ObservationSet& obs, const VarianceComponents& vc,
                                  bool with_factors) {
  AutoregressionBundle b;
  auto [m, m0] = build_M(obs, vc);
  b.M = std::move(m);
  b.M0 = std::move(m0);
  if (with_factors) {
    auto [b1, b2] = build_B1_B2(obs, vc);
    b.B1 = std::move(b1);
    b.B2 = std::move(b2);
  }
  b.spec_norm = spectral_norm(b.M);
  const SpectralRadiusEstimate r = spectral_radius_estimate(b.M);
  b.spec_radius = r.value;
  b.radius_dense = r.dense;
  b.geometric = b.spec_radius < 1.0;
  b.t_rel = b.geometric ? relaxation_time(b.spec_radius) : std::numeric_limits<double>::quiet_NaN();
  return b;
}

}  // namespace crossed
