#include "gtrs/regularized.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gtrs {

EndpointContext make_endpoint_context(const GtrsProblem& prob, double lambda_e,
                                      const Eigen::MatrixXd& v_metric, const SolverConfig& cfg,
                                      MatvecCounter counter) {
  EndpointContext ctx;
  ctx.lambda_e = lambda_e;
  ctx.v_metric = v_metric;

  LinearOperator s_op = pencil_operator(prob.A, prob.B, prob.lambda_hat);
  s_op.set_counter(counter);

  ctx.w.resize(prob.dim(), v_metric.cols());
  for (Index j = 0; j < v_metric.cols(); ++j) ctx.w.col(j) = s_op(v_metric.col(j));

  CgResult z_res = cg_solve(s_op, prob.a + prob.lambda_hat * prob.b, cfg.cg_tol,
                            cfg.cg_max_iter(prob.dim()));
  if (z_res.stats.breakdown) {
    throw std::runtime_error("make_endpoint_context: A + lambda_hat B is not positive definite");
  }
  ctx.z = std::move(z_res.x);
  ctx.z_stats = z_res.stats;
  ctx.rhs_base = prob.B * ctx.z - prob.b;
  return ctx;
}

CgResult regularized_solve(const GtrsProblem& prob, double lambda, const EndpointContext& ctx,
                           const SolverConfig& cfg, MatvecCounter counter) {
  LinearOperator base = pencil_operator(prob.A, prob.B, lambda);
  base.set_counter(counter);
  LinearOperator augmented = low_rank_update_operator(base, ctx.w, cfg.alpha_reg);

  const Vector rhs = (lambda - prob.lambda_hat) * ctx.rhs_base;
  CgResult res = cg_solve(augmented, rhs, cfg.cg_tol, cfg.cg_max_iter(prob.dim()));
  if (res.stats.breakdown) {
    throw std::runtime_error(
        "regularized_solve: augmented operator not positive definite at lambda = " +
        std::to_string(lambda) + " (endpoint " + std::to_string(ctx.lambda_e) + ")");
  }
  res.x -= ctx.z;
  return res;
}

}  // namespace gtrs
