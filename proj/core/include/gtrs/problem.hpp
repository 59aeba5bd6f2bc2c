// Problem data for min x^T A x + 2 a^T x subject to
// x^T B x + 2 b^T x + beta <= 0, with a known lambda_hat >= 0 making
// A + lambda_hat B positive definite.
#pragma once

#include <optional>

#include "gtrs/sparse_matrix.hpp"

namespace gtrs {

struct GtrsProblem {
  SparseSymmetric A;
  SparseSymmetric B;
  Vector a;
  Vector b;
  double beta = 0.0;
  double lambda_hat = 0.0;

  Index dim() const { return A.dim(); }

  /// Checks dimensions and lambda_hat >= 0. Positive definiteness of
  /// A + lambda_hat B is validated lazily: a CG breakdown on that operator is
  /// reported as an input error by the solver.
  void validate() const;
};

/// Objective q(x) = x^T A x + 2 a^T x.
double eval_q(const GtrsProblem& prob, const Vector& x);

/// Constraint g(x) = x^T B x + 2 b^T x + beta.
double eval_g(const GtrsProblem& prob, const Vector& x);

struct KktReport {
  double stationarity = 0.0;    ///< ||(A + lambda B) x + (a + lambda b)||
  double feasibility = 0.0;     ///< g(x)
  double complementarity = 0.0; ///< |lambda * g(x)|
  bool multiplier_in_interval = true;
};

/// Residuals of the optimality conditions at (x, lambda). The interval
/// membership flag uses the bounds when the caller has them.
KktReport kkt_residual(const GtrsProblem& prob, const Vector& x, double lambda,
                       std::optional<double> lower = std::nullopt,
                       std::optional<double> upper = std::nullopt,
                       double interval_tol = 1e-8);

/// The scalar the success criterion bounds: stationarity, and |g(x)| as well
/// for boundary solutions (lambda > 0).
double success_metric(const KktReport& kkt, bool boundary);

}  // namespace gtrs
