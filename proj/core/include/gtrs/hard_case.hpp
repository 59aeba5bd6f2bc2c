// Hard-case-2 recognition at a finite endpoint of the definiteness interval:
// null-space basis, range test, pseudo-inverse solve, the extremal value p*
// of the constraint over the endpoint solution set, and the boundary step.
#pragma once

#include <optional>

#include "gtrs/cg.hpp"
#include "gtrs/config.hpp"
#include "gtrs/eigensolver.hpp"
#include "gtrs/interval.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

struct HardCase2Report {
  double endpoint = 0.0;
  Endpoint which = Endpoint::Lower;

  NullspaceBasis basis;  ///< z_euclid used for projections, z_metric for the regularized system

  /// ||Z^T (a + lambda_e b)|| against the range-membership threshold.
  double range_residual = 0.0;
  double range_threshold = 0.0;
  bool range_consistent = false;
  /// Residual within a factor 10 of the threshold: the call is fragile.
  bool range_borderline = false;

  /// Set only when the endpoint system is consistent.
  Vector x_particular;        ///< minimum-norm solution of (A + lambda_e B) x = -(a + lambda_e b)
  Vector y_star;              ///< solution of the reduced definite system
  Vector x_candidate;         ///< x_particular + Z y_star, the limit of x(lambda) at lambda_e
  double p_star = 0.0;        ///< extremal g over the solution set, = g(x_candidate)
  double p_star_tol = 0.0;
  double g_particular = 0.0;  ///< g(x_particular), the naive endpoint test value
  CgStats particular_stats;

  bool is_hard_case_2 = false;
};

/// The reduced matrix Z^T B Z fails the definiteness sign the endpoint
/// dictates; the endpoint value itself is suspect.
class EndpointInconsistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decides whether the optimal multiplier sits at the given finite endpoint.
/// The nullspace basis may be supplied when the caller already computed it.
HardCase2Report detect_hard_case2(const GtrsProblem& prob, double lambda_e, Endpoint which,
                                  const SolverConfig& cfg, MatvecCounter counter = nullptr,
                                  const NullspaceBasis* precomputed = nullptr);

/// Step x_base + alpha v onto the boundary g = 0, where v spans a null
/// direction of A + lambda_e B and p_star = g(x_base). Of the two real roots
/// the one with smaller q(x) wins; exact ties go to the smaller ||x||.
Vector boundary_step(const GtrsProblem& prob, const Vector& x_base, const Vector& v,
                     double p_star);

}  // namespace gtrs
