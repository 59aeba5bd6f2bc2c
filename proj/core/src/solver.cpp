#include "gtrs/solver.hpp"

#include <chrono>
#include <cmath>

namespace gtrs {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

SecularConfig secular_config(const SolverConfig& cfg) {
  SecularConfig s;
  s.kkt_tol = cfg.kkt_tol;
  s.width_tol = cfg.width_tol;
  s.max_iters = cfg.secular_max_iters;
  s.interp_guard = cfg.interp_guard;
  s.use_interpolation = cfg.use_interpolation;
  s.use_primal_step = cfg.use_primal_step;
  s.kkt_termination = cfg.kkt_termination;
  return s;
}

}  // namespace

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Interior: return "interior";
    case CaseKind::BoundaryEasy: return "boundary_easy";
    case CaseKind::HardCase1: return "hard_case_1";
    case CaseKind::HardCase2Lower: return "hard_case_2_lower";
    case CaseKind::HardCase2Upper: return "hard_case_2_upper";
    case CaseKind::ExactAtLambdaHat: return "exact_at_lambda_hat";
  }
  return "unknown";
}

PhiEval eval_phi(const GtrsProblem& prob, double lambda, const SolverConfig& cfg,
                 MatvecCounter counter) {
  LinearOperator op = pencil_operator(prob.A, prob.B, lambda);
  op.set_counter(counter);
  const Vector rhs = -(prob.a + lambda * prob.b);
  CgResult res = cg_solve(op, rhs, cfg.cg_tol, cfg.cg_max_iter(prob.dim()));
  if (res.stats.breakdown) {
    throw SolveError("eval_phi", "pencil not positive definite at lambda = " +
                                     std::to_string(lambda) +
                                     "; lambda is outside the definiteness interval");
  }
  PhiEval ev;
  ev.lambda = lambda;
  ev.x = std::move(res.x);
  ev.stats = res.stats;
  ev.phi = eval_g(prob, ev.x);
  ev.stationarity = (op(ev.x) - rhs).norm();
  ev.regularized = false;
  return ev;
}

double phi_prime(const GtrsProblem& prob, double lambda, const Vector& x_lambda,
                 const SolverConfig& cfg, MatvecCounter counter) {
  LinearOperator op = pencil_operator(prob.A, prob.B, lambda);
  op.set_counter(counter);
  const Vector w = prob.B * x_lambda + prob.b;
  CgResult res = cg_solve(op, w, cfg.cg_tol, cfg.cg_max_iter(prob.dim()));
  if (res.stats.breakdown) {
    throw SolveError("phi_prime", "pencil not positive definite at lambda = " +
                                      std::to_string(lambda));
  }
  return -2.0 * w.dot(res.x);
}

std::optional<GtrsOutcome> check_interior(const GtrsProblem& prob, const SolverConfig& cfg,
                                          PhiEval* unconstrained, MatvecCounter counter) {
  LinearOperator op = make_operator(prob.A);
  op.set_counter(counter);
  const Vector rhs = -prob.a;
  CgResult res = cg_solve(op, rhs, cfg.cg_tol, cfg.cg_max_iter(prob.dim()));
  if (res.stats.breakdown) {
    throw SolveError("check_interior",
                     "A certified positive definite by the interval but CG hit nonpositive "
                     "curvature; endpoints are inconsistent");
  }
  PhiEval ev;
  ev.lambda = 0.0;
  ev.x = std::move(res.x);
  ev.stats = res.stats;
  ev.phi = eval_g(prob, ev.x);
  ev.stationarity = (op(ev.x) - rhs).norm();
  if (unconstrained) *unconstrained = ev;

  if (ev.phi > 0.0) return std::nullopt;

  GtrsOutcome out;
  out.x_star = ev.x;
  out.lambda_star = 0.0;
  out.case_kind = CaseKind::Interior;
  return out;
}

RefineResult refine(const GtrsProblem& prob, const Vector& x, double lambda,
                    const SolverConfig& cfg, std::optional<double> lower,
                    std::optional<double> upper, MatvecCounter counter) {
  RefineResult best;
  best.x = x;
  best.lambda = lambda;
  best.metric = success_metric(kkt_residual(prob, x, lambda), true);

  Vector x_cur = x;
  double lambda_cur = lambda;
  const double lo = std::max(0.0, lower.value_or(0.0));
  const double hi = upper.value_or(std::numeric_limits<double>::infinity());

  for (int step = 0; step < cfg.refine_steps; ++step) {
    const double phi = eval_g(prob, x_cur);
    double derivative;
    try {
      derivative = phi_prime(prob, lambda_cur, x_cur, cfg, counter);
    } catch (const SolveError&) {
      break;
    }
    if (!(derivative < 0.0) || !std::isfinite(derivative)) break;
    const double lambda_next = lambda_cur - phi / derivative;
    if (!std::isfinite(lambda_next) || lambda_next < lo || lambda_next > hi) break;
    if (lambda_next == lambda_cur) break;

    PhiEval ev;
    try {
      ev = eval_phi(prob, lambda_next, cfg, counter);
    } catch (const SolveError&) {
      break;
    }
    const double metric = std::max(std::abs(ev.phi), ev.stationarity);
    best.steps = step + 1;
    if (metric < best.metric) {
      best.metric = metric;
      best.x = ev.x;
      best.lambda = lambda_next;
      best.improved = true;
      x_cur = std::move(ev.x);
      lambda_cur = lambda_next;
    } else {
      break;
    }
  }
  return best;
}

double polish_multiplier(const GtrsProblem& prob, const Vector& x, double lambda,
                         std::optional<double> lower, std::optional<double> upper) {
  const Vector w = prob.B * x + prob.b;
  const double denom = w.squaredNorm();
  if (denom <= 1e-300) return lambda;
  double candidate = -w.dot(prob.A * x + prob.a) / denom;
  if (!std::isfinite(candidate) || candidate < 0.0) return lambda;
  const double slack = 1e-6 * (1.0 + std::abs(lambda));
  if (lower && candidate < *lower - slack) return lambda;
  if (upper && candidate > *upper + slack) return lambda;

  const double before = success_metric(kkt_residual(prob, x, lambda), true);
  const double after = success_metric(kkt_residual(prob, x, candidate), true);
  return after < before ? candidate : lambda;
}

namespace {

struct HardCaseDetection {
  HardCase2Report report;
  double lambda_e;
};

// Detection with one retry under a tightened eigensolver when the endpoint
// looks inaccurate (not singular, or reduced-system sign check fails).
HardCaseDetection detect_with_retry(const GtrsProblem& prob, MultiplierInterval& interval,
                                    Endpoint which, const SolverConfig& cfg,
                                    MatvecCounter counter) {
  const double lambda_e = (which == Endpoint::Upper) ? interval.upper : interval.lower;
  try {
    return {detect_hard_case2(prob, lambda_e, which, cfg, counter), lambda_e};
  } catch (const NotSingularError&) {
  } catch (const EndpointInconsistentError&) {
  } catch (const EigFailure&) {
  }
  SolverConfig tight = cfg;
  tight.eig_tol = cfg.eig_tol * 1e-2;
  tight.eig_max_cycles = cfg.eig_max_cycles * 2;
  IntervalRequest req;
  (which == Endpoint::Upper ? req.upper : req.lower) = true;
  MultiplierInterval refreshed = multiplier_interval(prob, tight, req, counter);
  if (which == Endpoint::Upper) {
    interval.upper = refreshed.upper;
    interval.eig_up = refreshed.eig_up;
    interval.upper_borderline = refreshed.upper_borderline;
  } else {
    interval.lower = refreshed.lower;
    interval.eig_low = refreshed.eig_low;
    interval.lower_borderline = refreshed.lower_borderline;
  }
  const double lambda_retry = (which == Endpoint::Upper) ? interval.upper : interval.lower;
  return {detect_hard_case2(prob, lambda_retry, which, tight, counter), lambda_retry};
}

}  // namespace

GtrsOutcome solve(const GtrsProblem& prob, const SolverConfig& cfg) {
  prob.validate();
  const auto t_start = Clock::now();
  MatvecCounter counter = make_matvec_counter();

  GtrsOutcome out;
  auto add_trace = [&out](const PhiEval& ev) {
    out.trace.push_back({ev.lambda, ev.phi, ev.stats.iterations, ev.regularized});
  };

  auto finalize = [&](CaseKind kind, Vector x, double lambda) -> GtrsOutcome {
    out.case_kind = kind;
    out.x_star = std::move(x);
    out.lambda_star = lambda;
    std::optional<double> lo, hi;
    if (out.interval.lower_computed) lo = std::max(0.0, out.interval.lower);
    if (out.interval.has_finite_upper()) hi = out.interval.upper;
    out.kkt = kkt_residual(prob, out.x_star, out.lambda_star, lo, hi,
                           1e-6 * (1.0 + std::abs(out.lambda_star)));
    const bool boundary = kind != CaseKind::Interior;
    out.metric = success_metric(out.kkt, boundary);
    out.success = out.metric < cfg.kkt_tol &&
                  (boundary || out.kkt.feasibility <= cfg.kkt_tol);
    out.best_objective = eval_q(prob, out.x_star);
    out.matvecs = counter->load();
    out.times.total_s = elapsed_s(t_start);
    return out;
  };

  // Hard-case-2 endpoint solution: boundary step plus a multiplier polish.
  auto finish_hard_case2 = [&](const HardCaseDetection& det) -> GtrsOutcome {
    const HardCase2Report& hc = *out.hard_case;
    const Vector v = hc.basis.z_euclid.col(0);
    Vector x_star = boundary_step(prob, hc.x_candidate, v, hc.p_star);
    const auto t_ref = Clock::now();
    std::optional<double> lo, hi;
    if (out.interval.lower_computed) lo = std::max(0.0, out.interval.lower);
    if (out.interval.has_finite_upper()) hi = out.interval.upper;
    const double lambda_star = polish_multiplier(prob, x_star, det.lambda_e, lo, hi);
    out.times.refine_s += elapsed_s(t_ref);
    const CaseKind kind = (det.report.which == Endpoint::Upper) ? CaseKind::HardCase2Upper
                                                                : CaseKind::HardCase2Lower;
    return finalize(kind, std::move(x_star), lambda_star);
  };

  // Shared tail for every path that ends in a secular iteration.
  auto finish_secular = [&](Bracket bracket, const PhiEvaluator& evaluator, CaseKind kind,
                            std::optional<double> refine_lo,
                            std::optional<double> refine_hi) -> GtrsOutcome {
    const auto t_sec = Clock::now();
    out.secular_initial_bracket = bracket;
    SecularResult sec = solve_secular(prob, bracket, evaluator, secular_config(cfg));
    out.times.secular_s += elapsed_s(t_sec);
    out.secular_final_bracket = sec.final_bracket;
    out.secular_iterations = sec.iterations;
    out.secular_status = sec.status;
    for (const auto& entry : sec.trace) out.trace.push_back(entry);
    if (sec.status == SecularStatus::MaxIterations) {
      out.notes += "secular iteration hit the iteration cap; best pair kept; ";
    }

    const auto t_ref = Clock::now();
    Vector x = sec.x;
    double lambda = sec.lambda;
    if (!sec.returned_incumbent) {
      RefineResult ref = refine(prob, x, lambda, cfg, refine_lo, refine_hi, counter);
      if (ref.improved) {
        x = std::move(ref.x);
        lambda = ref.lambda;
      }
    }
    const double polished = polish_multiplier(prob, x, lambda, refine_lo, refine_hi);
    lambda = polished;
    out.times.refine_s += elapsed_s(t_ref);
    return finalize(kind, std::move(x), lambda);
  };

  // Case dispatch on phi(lambda_hat).
  PhiEval at_hat;
  try {
    at_hat = eval_phi(prob, prob.lambda_hat, cfg, counter);
  } catch (const SolveError&) {
    throw SolveError("input", "A + lambda_hat B is not positive definite (Assumption 2)");
  }
  add_trace(at_hat);

  const double phi_tol = cfg.phi_tol_factor * (1.0 + std::abs(prob.beta));
  if (std::abs(at_hat.phi) <= phi_tol) {
    return finalize(CaseKind::ExactAtLambdaHat, std::move(at_hat.x), prob.lambda_hat);
  }

  if (at_hat.phi > 0.0) {
    // The multiplier lies in (lambda_hat, upper]; only the upper endpoint is needed.
    const auto t_int = Clock::now();
    out.interval = multiplier_interval(prob, cfg, {.lower = false, .upper = true}, counter);
    out.times.interval_s += elapsed_s(t_int);
    if (out.interval.upper_borderline) out.notes += "upper endpoint decision borderline; ";

    if (!out.interval.has_finite_upper()) {
      // Infinite endpoint: bracket upward by doubling steps; the limit of phi
      // is negative, so this terminates.
      double lambda_pos = prob.lambda_hat;
      double phi_pos = at_hat.phi;
      Vector x_pos = at_hat.x;
      const double step0 = std::max(1.0, std::abs(prob.lambda_hat));
      std::optional<PhiEval> negative;
      for (int k = 0; k <= 60; ++k) {
        const double lambda_k = prob.lambda_hat + std::ldexp(step0, k);
        PhiEval ev = eval_phi(prob, lambda_k, cfg, counter);
        add_trace(ev);
        if (ev.phi > 0.0) {
          lambda_pos = lambda_k;
          phi_pos = ev.phi;
          x_pos = std::move(ev.x);
          continue;
        }
        negative = std::move(ev);
        break;
      }
      if (!negative) {
        throw SolveError("bracket",
                         "phi stayed positive beyond lambda_hat + 2^60; the infinite upper "
                         "endpoint classification looks wrong");
      }
      Bracket bracket;
      bracket.lo = lambda_pos;
      bracket.hi = negative->lambda;
      bracket.phi_lo = phi_pos;
      bracket.x_lo = x_pos;
      bracket.phi_hi = negative->phi;
      bracket.x_hi = negative->x;
      auto evaluator = [&prob, &cfg, counter](double lambda) {
        return eval_phi(prob, lambda, cfg, counter);
      };
      return finish_secular(bracket, evaluator, CaseKind::BoundaryEasy, prob.lambda_hat,
                            std::nullopt);
    }

    const auto t_hc = Clock::now();
    HardCaseDetection det = detect_with_retry(prob, out.interval, Endpoint::Upper, cfg, counter);
    out.times.hard_case_s += elapsed_s(t_hc);
    out.hard_case = det.report;
    if (det.report.range_borderline) out.notes += "range test borderline at upper endpoint; ";
    if (det.report.is_hard_case_2) return finish_hard_case2(det);

    Bracket bracket;
    bracket.lo = prob.lambda_hat;
    bracket.hi = det.lambda_e;
    bracket.phi_lo = at_hat.phi;
    bracket.x_lo = at_hat.x;
    if (det.report.range_consistent) {
      bracket.phi_hi = det.report.p_star;
      bracket.x_hi = det.report.x_candidate;
    }
    if (!(bracket.lo < bracket.hi)) {
      throw SolveError("bracket", "computed upper endpoint does not exceed lambda_hat");
    }

    std::shared_ptr<EndpointContext> ctx;
    if (det.report.range_consistent) {
      ctx = std::make_shared<EndpointContext>(make_endpoint_context(
          prob, det.lambda_e, det.report.basis.z_metric, cfg, counter));
    }
    const double lambda_e = det.lambda_e;
    auto evaluator = [&prob, &cfg, counter, ctx, lambda_e](double lambda) {
      if (ctx && std::abs(lambda - lambda_e) < cfg.endpoint_guard * std::max(1.0, std::abs(lambda_e))) {
        CgResult res = regularized_solve(prob, lambda, *ctx, cfg, counter);
        PhiEval ev;
        ev.lambda = lambda;
        ev.x = std::move(res.x);
        ev.stats = res.stats;
        ev.phi = eval_g(prob, ev.x);
        LinearOperator op = pencil_operator(prob.A, prob.B, lambda);
        op.set_counter(counter);
        ev.stationarity = (op(ev.x) + prob.a + lambda * prob.b).norm();
        ev.regularized = true;
        return ev;
      }
      return eval_phi(prob, lambda, cfg, counter);
    };
    const CaseKind kind =
        det.report.range_consistent ? CaseKind::HardCase1 : CaseKind::BoundaryEasy;
    return finish_secular(bracket, evaluator, kind, prob.lambda_hat, det.lambda_e);
  }

  // phi(lambda_hat) < 0: the multiplier lies in [max(0, lower), lambda_hat).
  const auto t_int = Clock::now();
  out.interval = multiplier_interval(prob, cfg, {.lower = true, .upper = false}, counter);
  out.times.interval_s += elapsed_s(t_int);
  if (out.interval.lower_borderline) out.notes += "lower endpoint decision borderline; ";

  if (out.interval.lower < 0.0) {
    // A is positive definite here; the unconstrained minimizer may be interior.
    if (prob.lambda_hat == 0.0) {
      // x(lambda_hat) is already the unconstrained minimizer and is feasible.
      return finalize(CaseKind::Interior, std::move(at_hat.x), 0.0);
    }
    PhiEval at_zero;
    std::optional<GtrsOutcome> interior = check_interior(prob, cfg, &at_zero, counter);
    add_trace(at_zero);
    if (interior) {
      return finalize(CaseKind::Interior, std::move(interior->x_star), 0.0);
    }
    Bracket bracket;
    bracket.lo = 0.0;
    bracket.hi = prob.lambda_hat;
    bracket.phi_lo = at_zero.phi;
    bracket.x_lo = at_zero.x;
    bracket.phi_hi = at_hat.phi;
    bracket.x_hi = at_hat.x;
    auto evaluator = [&prob, &cfg, counter](double lambda) {
      return eval_phi(prob, lambda, cfg, counter);
    };
    return finish_secular(bracket, evaluator, CaseKind::BoundaryEasy, 0.0, prob.lambda_hat);
  }

  const auto t_hc = Clock::now();
  HardCaseDetection det = detect_with_retry(prob, out.interval, Endpoint::Lower, cfg, counter);
  out.times.hard_case_s += elapsed_s(t_hc);
  out.hard_case = det.report;
  if (det.report.range_borderline) out.notes += "range test borderline at lower endpoint; ";
  if (det.report.is_hard_case_2) return finish_hard_case2(det);

  Bracket bracket;
  bracket.lo = det.lambda_e;
  bracket.hi = prob.lambda_hat;
  bracket.phi_hi = at_hat.phi;
  bracket.x_hi = at_hat.x;
  if (det.report.range_consistent) {
    bracket.phi_lo = det.report.p_star;
    bracket.x_lo = det.report.x_candidate;
  }
  if (!(bracket.lo < bracket.hi)) {
    throw SolveError("bracket", "computed lower endpoint does not fall below lambda_hat");
  }

  std::shared_ptr<EndpointContext> ctx;
  if (det.report.range_consistent) {
    ctx = std::make_shared<EndpointContext>(
        make_endpoint_context(prob, det.lambda_e, det.report.basis.z_metric, cfg, counter));
  }
  const double lambda_e = det.lambda_e;
  auto evaluator = [&prob, &cfg, counter, ctx, lambda_e](double lambda) {
    if (ctx && std::abs(lambda - lambda_e) < cfg.endpoint_guard * std::max(1.0, std::abs(lambda_e))) {
      CgResult res = regularized_solve(prob, lambda, *ctx, cfg, counter);
      PhiEval ev;
      ev.lambda = lambda;
      ev.x = std::move(res.x);
      ev.stats = res.stats;
      ev.phi = eval_g(prob, ev.x);
      LinearOperator op = pencil_operator(prob.A, prob.B, lambda);
      op.set_counter(counter);
      ev.stationarity = (op(ev.x) + prob.a + lambda * prob.b).norm();
      ev.regularized = true;
      return ev;
    }
    return eval_phi(prob, lambda, cfg, counter);
  };
  const CaseKind kind = det.report.range_consistent ? CaseKind::HardCase1 : CaseKind::BoundaryEasy;
  return finish_secular(bracket, evaluator, kind, det.lambda_e, prob.lambda_hat);
}

}  // namespace gtrs
