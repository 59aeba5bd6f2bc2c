// Well-conditioned replacement for (A + lambda B) x = -(a + lambda b) when
// lambda approaches a consistent singular endpoint: the operator is augmented
// with alpha * sum_i (S v_i)(S v_i)^T over an S-orthonormal null basis, which
// is positive definite at the endpoint itself and has the same solution after
// the shift by z = S^{-1}(a + lambda_hat b).
#pragma once

#include "gtrs/cg.hpp"
#include "gtrs/config.hpp"
#include "gtrs/eigensolver.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

struct EndpointContext {
  double lambda_e = 0.0;
  Eigen::MatrixXd v_metric;  ///< S-orthonormal null basis of A + lambda_e B
  Eigen::MatrixXd w;         ///< columns S v_i
  Vector z;                  ///< S^{-1} (a + lambda_hat b)
  Vector rhs_base;           ///< B z - b
  CgStats z_stats;
};

/// Precomputes the pieces shared by every regularized solve near lambda_e.
EndpointContext make_endpoint_context(const GtrsProblem& prob, double lambda_e,
                                      const Eigen::MatrixXd& v_metric, const SolverConfig& cfg,
                                      MatvecCounter counter = nullptr);

/// Solves (A + lambda B) x = -(a + lambda b) through the augmented system.
/// Requires lambda != lambda_hat strictly inside the definiteness interval.
CgResult regularized_solve(const GtrsProblem& prob, double lambda, const EndpointContext& ctx,
                           const SolverConfig& cfg, MatvecCounter counter = nullptr);

}  // namespace gtrs
