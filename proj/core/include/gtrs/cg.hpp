// Conjugate gradients for SPD operators, plus the deflated variant used for
// consistent singular systems (pseudo-inverse solutions).
#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "gtrs/linear_operator.hpp"

namespace gtrs {

struct CgStats {
  Index iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  /// Set when p^T (Op p) <= 0 is met, i.e. the operator is not positive
  /// definite along the search direction. The best iterate so far is returned.
  bool breakdown = false;
};

struct CgResult {
  Vector x;
  CgStats stats;
};

/// Called after each iteration with (iteration, current iterate).
using CgCallback = std::function<void(Index, const Vector&)>;

/// Solve op x = rhs to ||rhs - op x|| <= tol * max(1, ||rhs||).
/// x0 empty means a zero start.
CgResult cg_solve(const LinearOperator& op, const Vector& rhs, double tol, Index max_iter,
                  const Vector& x0 = Vector(), const CgCallback& on_iterate = nullptr);

/// CG on a consistent singular system with known null-space basis Z
/// (Euclidean-orthonormal columns). The right-hand side, the iterate and the
/// residual are re-projected onto range(op) every iteration; with the default
/// zero start the minimum-norm solution is returned.
CgResult deflated_cg_solve(const LinearOperator& op, const Vector& rhs, const Eigen::MatrixXd& z,
                           double tol, Index max_iter);

}  // namespace gtrs
