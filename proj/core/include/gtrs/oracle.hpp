// Dense reference solver for small instances: simultaneous diagonalization of
// (A, B) through the positive definite point, closed-form phi in diagonal
// coordinates, high-precision bisection, and exact endpoint analysis. Used as
// ground truth in tests and benchmarks, never as a solver path.
#pragma once

#include <Eigen/Core>

#include "gtrs/solver.hpp"

namespace gtrs {
namespace oracle {

struct SimDiag {
  Eigen::MatrixXd q;  ///< invertible; q^T A q = diag(d), q^T B q = diag(e)
  Vector d;
  Vector e;
};

/// Congruence diagonalizing A and B simultaneously, normalized so that
/// d_i + lambda_hat * e_i = 1. Requires A + lambda_hat B positive definite.
SimDiag simdiag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double lambda_hat);

struct OracleOptions {
  Index dense_threshold = 500;
  double width_tol = 1e-14;        ///< bisection relative width
  double kkt_tol = 1e-8;           ///< for the success flag only
  double range_test_tol = 1e-8;    ///< consistency threshold at endpoints
  double phi_tol_factor = 1e-10;   ///< lambda_hat acceptance
  double hard_case_tol = 1e-8;
};

struct OracleResult {
  GtrsOutcome outcome;
  /// How decisively the instance classifies: roughly the distance of the
  /// optimal multiplier from every case boundary (zero when a threshold call
  /// was borderline). Agreement checks skip instances with a small margin.
  double classification_margin = 0.0;
  /// Endpoint p* when an endpoint was analyzed.
  std::optional<double> p_star;
};

OracleResult dense_solve(const GtrsProblem& prob, const OracleOptions& opts = {});

/// Relative objective difference (q_star - q_best) / |q_best|; falls back to
/// the absolute difference when q_best vanishes.
double accuracy(double q_x_star, double q_x_best, bool* absolute_fallback = nullptr);

}  // namespace oracle
}  // namespace gtrs
