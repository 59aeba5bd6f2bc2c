#include "gtrs/secular.hpp"

#include <cmath>
#include <stdexcept>

namespace gtrs {

std::optional<double> inverse_interp(double lambda_pos, double phi_pos, double lambda_neg,
                                     double phi_neg, double lo, double hi, double guard) {
  const double denom = phi_neg - phi_pos;
  const double scale = std::abs(phi_neg) + std::abs(phi_pos);
  if (std::abs(denom) <= guard * scale || denom == 0.0) return std::nullopt;
  const double lambda_new = lambda_pos - phi_pos * (lambda_neg - lambda_pos) / denom;
  if (!(lambda_new > lo && lambda_new < hi)) return std::nullopt;
  return lambda_new;
}

std::optional<BoundaryPoint> primal_boundary_point(const GtrsProblem& prob, const Vector& x_pos,
                                                   const Vector& x_neg) {
  // g(x_neg + alpha dx) = c2 alpha^2 + 2 c1 alpha + c0, alpha=1 at x_pos.
  const Vector dx = x_pos - x_neg;
  const Vector b_xneg = prob.B * x_neg;
  const Vector b_dx = prob.B * dx;
  const double c2 = dx.dot(b_dx);
  const double c1 = dx.dot(b_xneg + prob.b);
  const double c0 = x_neg.dot(b_xneg) + 2.0 * prob.b.dot(x_neg) + prob.beta;

  constexpr double kInside = 1e-9;
  double roots[2];
  int nroots = 0;
  if (std::abs(c2) <= 1e-14 * (std::abs(c1) + std::abs(c0) + 1e-300)) {
    if (c1 == 0.0) return std::nullopt;
    roots[nroots++] = -c0 / (2.0 * c1);
  } else {
    double disc = c1 * c1 - c2 * c0;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t = (c1 >= 0.0) ? -(c1 + sq) : (-c1 + sq);
    roots[nroots++] = t / c2;
    if (t != 0.0) roots[nroots++] = c0 / t;
  }

  std::optional<BoundaryPoint> best;
  for (int i = 0; i < nroots; ++i) {
    double alpha = roots[i];
    if (alpha < -kInside || alpha > 1.0 + kInside) continue;
    alpha = std::clamp(alpha, 0.0, 1.0);
    BoundaryPoint pt;
    pt.x = x_neg + alpha * dx;
    pt.q = eval_q(prob, pt.x);
    pt.g = eval_g(prob, pt.x);
    if (!best || pt.q < best->q) best = std::move(pt);
  }
  return best;
}

SecularResult solve_secular(const GtrsProblem& prob, Bracket bracket,
                            const PhiEvaluator& evaluate, const SecularConfig& cfg) {
  if (!(bracket.lo < bracket.hi)) {
    throw std::invalid_argument("solve_secular: bracket is empty");
  }
  if (bracket.phi_lo && !(*bracket.phi_lo > 0.0)) {
    throw std::invalid_argument("solve_secular: phi at the lower end must be positive");
  }
  if (bracket.phi_hi && !(*bracket.phi_hi < 0.0)) {
    throw std::invalid_argument("solve_secular: phi at the upper end must be negative");
  }

  SecularResult result;
  result.final_bracket = bracket;

  // Best (lambda, x) pair by the success criterion seen so far.
  double best_metric = std::numeric_limits<double>::infinity();
  auto consider = [&](double lambda, const Vector& x, double g_value, double stationarity,
                      bool from_incumbent) {
    const double metric = std::max(std::abs(g_value), stationarity);
    if (metric < best_metric) {
      best_metric = metric;
      result.lambda = lambda;
      result.x = x;
      result.phi = g_value;
      result.metric = metric;
      result.returned_incumbent = from_incumbent;
    }
    return metric;
  };

  // Interpolation that keeps updating the same bracket end stagnates the way
  // plain regula falsi does; after two one-sided updates the next step is a
  // plain midpoint, which preserves the bisection guarantee.
  int last_side = -1;
  int same_side_streak = 0;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    double candidate = 0.5 * (bracket.lo + bracket.hi);
    if (cfg.use_interpolation && bracket.phi_lo && bracket.phi_hi && same_side_streak < 2) {
      auto interp = inverse_interp(bracket.lo, *bracket.phi_lo, bracket.hi, *bracket.phi_hi,
                                   bracket.lo, bracket.hi, cfg.interp_guard);
      if (interp) candidate = *interp;
    } else if (same_side_streak >= 2) {
      same_side_streak = 0;
    }

    PhiEval ev = evaluate(candidate);
    result.iterations = it;
    result.trace.push_back({ev.lambda, ev.phi, ev.stats.iterations, ev.regularized});

    const double iterate_metric = consider(ev.lambda, ev.x, ev.phi, ev.stationarity, false);

    const int side = ev.phi > 0.0 ? 0 : 1;
    if (ev.phi > 0.0) {
      bracket.lo = ev.lambda;
      bracket.phi_lo = ev.phi;
      bracket.x_lo = ev.x;
    } else {
      bracket.hi = ev.lambda;
      bracket.phi_hi = ev.phi;
      bracket.x_hi = ev.x;
    }
    same_side_streak = (side == last_side) ? same_side_streak + 1 : 0;
    last_side = side;
    result.final_bracket = bracket;

    double incumbent_metric = std::numeric_limits<double>::infinity();
    if (cfg.use_primal_step && bracket.x_lo && bracket.x_hi) {
      auto bd = primal_boundary_point(prob, *bracket.x_lo, *bracket.x_hi);
      if (bd && (!result.incumbent || bd->q < result.incumbent->q)) {
        result.incumbent = bd;
      }
      if (result.incumbent) {
        const KktReport kkt = kkt_residual(prob, result.incumbent->x, ev.lambda);
        incumbent_metric = consider(ev.lambda, result.incumbent->x, result.incumbent->g,
                                    kkt.stationarity, true);
      }
    }

    if (cfg.kkt_termination &&
        std::min(iterate_metric, incumbent_metric) < cfg.kkt_tol) {
      result.status = SecularStatus::KktSatisfied;
      return result;
    }
    if (bracket.relative_width() < cfg.width_tol) {
      result.status = SecularStatus::WidthConverged;
      return result;
    }
  }

  result.status = SecularStatus::MaxIterations;
  return result;
}

}  // namespace gtrs
