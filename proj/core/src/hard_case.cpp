#include "gtrs/hard_case.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gtrs {

namespace {

EigOptions eig_options(const GtrsProblem& prob, const SolverConfig& cfg) {
  EigOptions opts;
  opts.tol = cfg.eig_tol;
  opts.max_cycles = cfg.eig_max_cycles;
  opts.seed = cfg.seed ^ 0xc2b2ae3d27d4eb4full;
  opts.inner_cg_tol = std::max(cfg.cg_tol, 1e-12);
  opts.inner_cg_max_iter = cfg.cg_max_iter(prob.dim());
  return opts;
}

}  // namespace

HardCase2Report detect_hard_case2(const GtrsProblem& prob, double lambda_e, Endpoint which,
                                  const SolverConfig& cfg, MatvecCounter counter,
                                  const NullspaceBasis* precomputed) {
  if (!std::isfinite(lambda_e)) {
    throw std::invalid_argument("detect_hard_case2: endpoint must be finite");
  }

  HardCase2Report rep;
  rep.endpoint = lambda_e;
  rep.which = which;

  LinearOperator p_op = pencil_operator(prob.A, prob.B, lambda_e);
  p_op.set_counter(counter);

  if (precomputed) {
    rep.basis = *precomputed;
  } else {
    LinearOperator s_op = pencil_operator(prob.A, prob.B, prob.lambda_hat);
    s_op.set_counter(counter);
    rep.basis = nullspace_basis(p_op, s_op, cfg.nullspace_rank_tol, cfg.nullspace_max_dim,
                                eig_options(prob, cfg));
  }
  const Eigen::MatrixXd& z = rep.basis.z_euclid;
  const Index r = z.cols();

  const Vector rhs = -(prob.a + lambda_e * prob.b);
  rep.range_residual = (z.transpose() * rhs).norm();
  rep.range_threshold = cfg.range_test_tol * (1.0 + rhs.norm());
  rep.range_consistent = rep.range_residual <= rep.range_threshold;
  rep.range_borderline = rep.range_residual > 0.1 * rep.range_threshold &&
                         rep.range_residual < 10.0 * rep.range_threshold;

  if (!rep.range_consistent) {
    rep.is_hard_case_2 = false;
    return rep;
  }

  // Minimum-norm solution of the consistent singular system.
  CgResult pcg = deflated_cg_solve(p_op, rhs, z, cfg.cg_tol, cfg.cg_max_iter(prob.dim()));
  if (pcg.stats.breakdown) {
    throw EndpointInconsistentError(
        "detect_hard_case2: endpoint eigenstructure inconsistent (deflated system not positive "
        "definite at lambda_e = " +
        std::to_string(lambda_e) + ")");
  }
  rep.x_particular = std::move(pcg.x);
  rep.particular_stats = pcg.stats;
  rep.g_particular = eval_g(prob, rep.x_particular);

  // Reduced system (Z^T B Z) y = -Z^T (B x_particular + b); the sign of
  // Z^T B Z is dictated by the endpoint and certifies lambda_e itself.
  Eigen::MatrixXd bz(prob.dim(), r);
  for (Index j = 0; j < r; ++j) bz.col(j) = prob.B * z.col(j);
  Eigen::MatrixXd h = z.transpose() * bz;
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double required_sign = (which == Endpoint::Lower) ? 1.0 : -1.0;
  for (Index i = 0; i < r; ++i) {
    if (required_sign * es.eigenvalues()[i] <= 0.0) {
      throw EndpointInconsistentError(
          "detect_hard_case2: endpoint eigenstructure inconsistent (Z^T B Z has eigenvalue " +
          std::to_string(es.eigenvalues()[i]) + " at the " +
          (which == Endpoint::Lower ? std::string("lower") : std::string("upper")) +
          " endpoint)");
    }
  }

  Vector reduced_rhs = -(z.transpose() * (prob.B * rep.x_particular + prob.b));
  rep.y_star = es.eigenvectors() *
               (es.eigenvalues().cwiseInverse().asDiagonal() *
                (es.eigenvectors().transpose() * reduced_rhs));

  rep.x_candidate = rep.x_particular + z * rep.y_star;
  rep.p_star = eval_g(prob, rep.x_candidate);
  rep.p_star_tol = cfg.hard_case_tol * (1.0 + std::abs(prob.beta) + std::abs(rep.g_particular));

  rep.is_hard_case_2 = (which == Endpoint::Upper) ? (rep.p_star >= -rep.p_star_tol)
                                                  : (rep.p_star <= rep.p_star_tol);
  return rep;
}

Vector boundary_step(const GtrsProblem& prob, const Vector& x_base, const Vector& v,
                     double p_star) {
  // g(x_base + alpha v) = c2 alpha^2 + 2 c1 alpha + c0 with c0 = p_star.
  const Vector bx = prob.B * x_base;
  const double c2 = v.dot(prob.B * v);
  const double c1 = v.dot(bx + prob.b);
  const double c0 = p_star;

  double disc = c1 * c1 - c2 * c0;
  const double disc_scale = std::abs(c1 * c1) + std::abs(c2 * c0) + 1e-300;
  if (disc < -1e-10 * disc_scale) {
    throw std::runtime_error("boundary_step: negative discriminant, endpoint data inconsistent");
  }
  if (disc < 0.0) disc = 0.0;
  const double sq = std::sqrt(disc);

  double alpha1, alpha2;
  if (std::abs(c2) < 1e-300) {
    if (std::abs(c1) < 1e-300) return x_base;  // constraint flat along v, p_star ~ 0
    alpha1 = alpha2 = -c0 / (2.0 * c1);
  } else if (c1 >= 0.0) {
    const double t = -(c1 + sq);
    alpha1 = t / c2;
    alpha2 = (t != 0.0) ? c0 / t : 0.0;
  } else {
    const double t = -c1 + sq;
    alpha1 = t / c2;
    alpha2 = (t != 0.0) ? c0 / t : 0.0;
  }

  const Vector x1 = x_base + alpha1 * v;
  const Vector x2 = x_base + alpha2 * v;
  const double q1 = eval_q(prob, x1);
  const double q2 = eval_q(prob, x2);
  const double tie = 1e-12 * (1.0 + std::max(std::abs(q1), std::abs(q2)));
  if (std::abs(q1 - q2) <= tie) {
    return x1.norm() <= x2.norm() ? x1 : x2;
  }
  return q1 < q2 ? x1 : x2;
}

}  // namespace gtrs
