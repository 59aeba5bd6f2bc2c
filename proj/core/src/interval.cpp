#include "gtrs/interval.hpp"

#include <cmath>

namespace gtrs {

namespace {

EigOptions eig_options(const GtrsProblem& prob, const SolverConfig& cfg) {
  EigOptions opts;
  opts.tol = cfg.eig_tol;
  opts.max_cycles = cfg.eig_max_cycles;
  opts.seed = cfg.seed;
  opts.inner_cg_tol = std::max(cfg.cg_tol, 1e-12);
  opts.inner_cg_max_iter = cfg.cg_max_iter(prob.dim());
  return opts;
}

// Smallest eigenvalue of (sign * B, A + lambda_hat B), retried once with a
// tighter budget if the first attempt stalls.
EigResult extreme_eigenvalue(const GtrsProblem& prob, const SolverConfig& cfg, double sign,
                             const MatvecCounter& counter) {
  LinearOperator m_op(prob.dim(),
                      [&prob, sign](const Vector& x, Vector& y) {
                        prob.B.multiply(x, y);
                        if (sign < 0) y = -y;
                      },
                      1);
  LinearOperator s_op = pencil_operator(prob.A, prob.B, prob.lambda_hat);
  m_op.set_counter(counter);
  s_op.set_counter(counter);

  EigOptions opts = eig_options(prob, cfg);
  try {
    return min_gen_eig(m_op, s_op, 1, opts);
  } catch (const EigFailure&) {
    opts.max_cycles *= 4;
    opts.subspace_cap = static_cast<int>(std::min<Index>(prob.dim(), 48));
    opts.seed ^= 0x781dca3bull;
    return min_gen_eig(m_op, s_op, 1, opts);
  }
}

}  // namespace

MultiplierInterval multiplier_interval(const GtrsProblem& prob, const SolverConfig& cfg,
                                       IntervalRequest request, MatvecCounter counter) {
  MultiplierInterval interval;
  // The deciding eigenvalue is compared against zero; when it is this close
  // the finite/infinite call is flagged as borderline.
  auto borderline = [](const EigResult& eig) {
    double scale = std::max(eig.norm_m_estimate, 1e-300) / std::max(eig.norm_s_estimate, 1e-300);
    return std::abs(eig.values[0]) <= 1e-10 * scale;
  };

  if (request.lower) {
    EigResult eig = extreme_eigenvalue(prob, cfg, -1.0, counter);
    const double nu = eig.values[0];
    interval.eig_low = nu;
    interval.lower_computed = true;
    interval.lower_borderline = borderline(eig);
    interval.lower = nu < 0.0 ? prob.lambda_hat + 1.0 / nu
                              : -std::numeric_limits<double>::infinity();
  }
  if (request.upper) {
    EigResult eig = extreme_eigenvalue(prob, cfg, +1.0, counter);
    const double mu = eig.values[0];
    interval.eig_up = mu;
    interval.upper_computed = true;
    interval.upper_borderline = borderline(eig);
    interval.upper = mu < 0.0 ? prob.lambda_hat - 1.0 / mu
                              : std::numeric_limits<double>::infinity();
  }
  return interval;
}

}  // namespace gtrs
