// Root finder for the secular equation phi(lambda) = 0 on a sign-changing
// bracket: safeguarded bisection accelerated by inverse linear interpolation,
// with a primal step to the boundary maintaining a feasible incumbent.
// Evaluation of phi is injected so this stays independent of endpoint logic.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gtrs/cg.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

struct SecularConfig {
  double kkt_tol = 1e-8;
  double width_tol = 1e-11;
  int max_iters = 200;
  double interp_guard = 1e-14;
  bool use_interpolation = true;
  bool use_primal_step = true;
  /// When false only the relative-width rule terminates (plain bisection).
  bool kkt_termination = true;
};

/// One evaluation of phi: x solves (A + lambda B) x = -(a + lambda b) to CG
/// tolerance and phi = g(x). stationarity is the measured residual norm.
struct PhiEval {
  double lambda = 0.0;
  double phi = 0.0;
  Vector x;
  CgStats stats;
  double stationarity = 0.0;
  bool regularized = false;
};

using PhiEvaluator = std::function<PhiEval(double)>;

/// Interval containing the root; phi > 0 at lo and phi < 0 at hi (phi is
/// non-increasing), endpoint values optional until evaluated.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> phi_lo;
  std::optional<double> phi_hi;
  std::optional<Vector> x_lo;
  std::optional<Vector> x_hi;

  double width() const { return hi - lo; }
  double relative_width() const { return (hi - lo) / (std::abs(hi) + std::abs(lo) + 1e-300); }
};

/// Root of the linear model of the inverse function lambda(phi); nullopt when
/// the secant is degenerate or the root leaves the open bracket.
std::optional<double> inverse_interp(double lambda_pos, double phi_pos, double lambda_neg,
                                     double phi_neg, double lo, double hi, double guard);

/// Boundary point on the segment between an infeasible point (g > 0) and a
/// strictly feasible one (g < 0), with its objective value.
struct BoundaryPoint {
  Vector x;
  double q = 0.0;
  double g = 0.0;
};
std::optional<BoundaryPoint> primal_boundary_point(const GtrsProblem& prob, const Vector& x_pos,
                                                   const Vector& x_neg);

enum class SecularStatus { KktSatisfied, WidthConverged, MaxIterations };

struct SecularTraceEntry {
  double lambda = 0.0;
  double phi = 0.0;
  Index cg_iterations = 0;
  bool regularized = false;
};

struct SecularResult {
  double lambda = 0.0;
  Vector x;
  double phi = 0.0;
  double metric = 0.0;  ///< max{|g-type value|, stationarity} of the returned pair
  SecularStatus status = SecularStatus::MaxIterations;
  int iterations = 0;
  Bracket final_bracket;
  std::vector<SecularTraceEntry> trace;
  /// Best feasible boundary point seen, by objective value.
  std::optional<BoundaryPoint> incumbent;
  bool returned_incumbent = false;
};

SecularResult solve_secular(const GtrsProblem& prob, Bracket bracket,
                            const PhiEvaluator& evaluate, const SecularConfig& cfg);

}  // namespace gtrs
