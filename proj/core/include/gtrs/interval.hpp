// The definiteness interval [lambda_low, lambda_up] of the pencil A + lambda B,
// computed from extreme generalized eigenvalues anchored at lambda_hat.
#pragma once

#include <optional>

#include "gtrs/config.hpp"
#include "gtrs/eigensolver.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

enum class Endpoint { Lower, Upper };

struct MultiplierInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  /// Raw pencil eigenvalues lambda_min(-B, S) and lambda_min(B, S) with
  /// S = A + lambda_hat B, when the corresponding endpoint was computed.
  std::optional<double> eig_low;
  std::optional<double> eig_up;
  bool lower_computed = false;
  bool upper_computed = false;
  /// Set when the deciding eigenvalue is too close to zero to call the
  /// endpoint finite or infinite with confidence.
  bool lower_borderline = false;
  bool upper_borderline = false;

  bool has_finite_lower() const { return lower_computed && std::isfinite(lower); }
  bool has_finite_upper() const { return upper_computed && std::isfinite(upper); }
};

struct IntervalRequest {
  bool lower = false;
  bool upper = false;
};

/// Computes the requested endpoint(s) only; the other is left unset. A
/// nonnegative smallest pencil eigenvalue means the endpoint is infinite.
MultiplierInterval multiplier_interval(const GtrsProblem& prob, const SolverConfig& cfg,
                                       IntervalRequest request,
                                       MatvecCounter counter = nullptr);

}  // namespace gtrs
