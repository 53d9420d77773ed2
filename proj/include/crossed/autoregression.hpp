#pragma once

#include <Eigen/Dense>
#include <functional>
#include <json.hpp>
#include <utility>

#include "crossed/missingness.hpp"
#include "crossed/model_core.hpp"

namespace crossed {

// Matrix-free operator for spectral estimation on sparse inputs.
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;    // A x
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_t;  // A^T x
};

LinearOperator sparse_operator(const SparseBinaryMatrix& z);

// Exact autoregression matrix of the collapsed chain's second-factor marginal
// and its uncentered form:
//   M0 = D2^-1 Z^T (I_R - w1 1_R^T) D1^-1 Z,   M = (I_C - w2 1_C^T) M0.
// Z is applied as a sparse operator; only the C x C results are dense.
// Returns (M, M0).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_M(const ObservationSet& obs,
                                                    const VarianceComponents& vc);

// Coefficient matrices of the two collapsed blocks' conditional means,
//   E(a1 | a2) = B1 a2 + b1,  E(a2 | a1) = B2 a1 + b2,
// with B1[i,j] = -Z[i,j]/(N_i. + lambda_A) + w1_i u_j and symmetrically for B2.
// Returns (B1, B2); M == B2 * B1 entrywise.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_B1_B2(const ObservationSet& obs,
                                                        const VarianceComponents& vc);

// Largest singular value. Dense symmetric eigensolver on A^T A below the
// cutoff, seeded power iteration otherwise; throws on non-convergence with the
// last iterate in the message.
double spectral_norm(const Eigen::MatrixXd& a, double tol = 1e-12, int max_iter = 50000,
                     Eigen::Index dense_cutoff = 64);
double spectral_norm(const LinearOperator& op, double tol = 1e-12, int max_iter = 50000);

struct SpectralRadiusEstimate {
  double value = 0.0;
  bool dense = true;  // dense eigensolver (authoritative) vs power-iteration fallback
};

// Magnitude of the largest eigenvalue: dense nonsymmetric eigendecomposition
// for order <= dense_cutoff, power iteration with 8 random restarts above it
// (flagged approximate in the estimate).
SpectralRadiusEstimate spectral_radius_estimate(const Eigen::MatrixXd& a, double tol = 1e-10,
                                                Eigen::Index dense_cutoff = 512);
double spectral_radius(const Eigen::MatrixXd& a, double tol = 1e-10);

// t_rel = 1 / (1 - spec_radius); throws for spec_radius outside [0, 1).
double relaxation_time(double spec_radius);

// phi(U) = 1/U^3 - (U-1)^2, the contraction-gap function; positive on [1, 1.52].
double phi_upsilon(double u);

enum class MPrimeSplit { Full, Factor1, Factor2 };

// Deterministic comparison matrix built from the probability pattern:
//   M'1 = (I_R - (1/R) Db1^(1/2) 1 1^T Db1^(-1/2)) Db1^(-1/2) Zb Db2^(-1/2)
//   M'2 = (I_C - (1/C) Db2^(1/2) 1 1^T Db2^(-1/2)) Db2^(-1/2) Zb^T Db1^(-1/2)
// with Zb = (p_ij), Db1 = diag(row sums), Db2 = diag(col sums); Full = M'2 M'1.
Eigen::MatrixXd build_M_prime(const ProbabilityPattern& pattern, MPrimeSplit split);

struct AutoregressionBundle {
  Eigen::MatrixXd M, M0;
  Eigen::MatrixXd B1, B2;  // filled only when requested
  double spec_norm = 0.0;
  double spec_radius = 0.0;
  bool radius_dense = true;
  bool geometric = true;  // spec_radius < 1
  double t_rel = 0.0;     // valid only when geometric

  nlohmann::json to_json() const;
};

AutoregressionBundle build_bundle(const ObservationSet& obs, const VarianceComponents& vc,
                                  bool with_factors = false);

}  // namespace crossed
