// Driver: dispatches on the sign of phi(lambda_hat), computes the needed
// definiteness-interval endpoint, recognizes hard case 2, runs the secular
// iteration with regularized evaluations near consistent endpoints, refines,
// and certifies the optimality conditions.
#pragma once

#include <optional>
#include <string>

#include "gtrs/config.hpp"
#include "gtrs/hard_case.hpp"
#include "gtrs/interval.hpp"
#include "gtrs/problem.hpp"
#include "gtrs/regularized.hpp"
#include "gtrs/secular.hpp"

namespace gtrs {

enum class CaseKind {
  Interior,
  BoundaryEasy,
  HardCase1,
  HardCase2Lower,
  HardCase2Upper,
  ExactAtLambdaHat,
};

std::string to_string(CaseKind kind);

struct PhaseTimes {
  double interval_s = 0.0;
  double hard_case_s = 0.0;
  double secular_s = 0.0;
  double refine_s = 0.0;
  double total_s = 0.0;
};

struct GtrsOutcome {
  Vector x_star;
  double lambda_star = 0.0;
  CaseKind case_kind = CaseKind::BoundaryEasy;
  KktReport kkt;
  double metric = 0.0;  ///< the certified success-criterion value
  bool success = false;
  double best_objective = 0.0;  ///< q(x_star)
  MultiplierInterval interval;
  std::optional<HardCase2Report> hard_case;
  std::vector<SecularTraceEntry> trace;  ///< every phi evaluation in order
  int secular_iterations = 0;
  std::optional<SecularStatus> secular_status;
  /// Brackets entering and leaving the secular iteration, when it ran.
  std::optional<Bracket> secular_initial_bracket;
  std::optional<Bracket> secular_final_bracket;
  std::int64_t matvecs = 0;
  PhaseTimes times;
  std::string notes;  ///< diagnostics (borderline range test, loose finishes)
};

/// Inner failure with the driver phase it occurred in.
class SolveError : public std::runtime_error {
 public:
  SolveError(std::string phase, const std::string& message)
      : std::runtime_error("[" + phase + "] " + message), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

/// phi(lambda) = g(x(lambda)) evaluated by CG on the positive definite
/// pencil; throws SolveError if the pencil is not positive definite there.
PhiEval eval_phi(const GtrsProblem& prob, double lambda, const SolverConfig& cfg,
                 MatvecCounter counter = nullptr);

/// phi'(lambda) = -2 w^T (A + lambda B)^{-1} w with w = B x(lambda) + b;
/// costs one CG solve.
double phi_prime(const GtrsProblem& prob, double lambda, const Vector& x_lambda,
                 const SolverConfig& cfg, MatvecCounter counter = nullptr);

/// Interior-solution test for the branch phi(lambda_hat) < 0, lower
/// endpoint < 0 (so A is positive definite): solves A x = -a and accepts if
/// feasible. On rejection the evaluation at lambda = 0 is handed back for
/// bracket reuse through `unconstrained`.
std::optional<GtrsOutcome> check_interior(const GtrsProblem& prob, const SolverConfig& cfg,
                                          PhiEval* unconstrained = nullptr,
                                          MatvecCounter counter = nullptr);

struct RefineResult {
  Vector x;
  double lambda = 0.0;
  double metric = 0.0;
  int steps = 0;
  bool improved = false;
};

/// Up to cfg.refine_steps Newton updates of the multiplier using the phi'
/// formula, each accepted only if the certified criterion improves. Steps
/// leaving [max(0, lower), upper] are rejected.
RefineResult refine(const GtrsProblem& prob, const Vector& x, double lambda,
                    const SolverConfig& cfg, std::optional<double> lower = std::nullopt,
                    std::optional<double> upper = std::nullopt, MatvecCounter counter = nullptr);

/// Least-squares multiplier for a fixed x, accepted on criterion improvement;
/// the refinement used where Newton on phi does not apply (endpoint cases).
double polish_multiplier(const GtrsProblem& prob, const Vector& x, double lambda,
                         std::optional<double> lower, std::optional<double> upper);

GtrsOutcome solve(const GtrsProblem& prob, const SolverConfig& cfg = {});

}  // namespace gtrs
