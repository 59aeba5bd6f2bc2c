// Every tolerance, iteration cap, regularization constant and seed the solver
// uses, in one place.
#pragma once

#include <cstdint>

#include "gtrs/sparse_matrix.hpp"

namespace gtrs {

struct SolverConfig {
  /// Success criterion: max{|g(x)| (boundary), ||(A+lambda B)x + (a+lambda b)||} below this.
  double kkt_tol = 1e-8;
  /// Bracket termination: |high-low| / (|high|+|low|) below this.
  double width_tol = 1e-11;

  double cg_tol = 1e-10;
  Index cg_max_iter_factor = 10;
  Index cg_max_iter(Index n) const { return cg_max_iter_factor * n; }

  double eig_tol = 1e-10;
  int eig_max_cycles = 200;

  /// Null-space acceptance: pencil eigenvalue <= rank_tol * ||P|| estimate.
  double nullspace_rank_tol = 1e-8;
  int nullspace_max_dim = 8;

  /// Range membership: ||Z^T r|| <= range_test_tol * (1 + ||r||).
  double range_test_tol = 1e-8;

  /// Switch to the regularized system when |lambda - lambda_e| is below
  /// endpoint_guard * max(1, |lambda_e|) and the endpoint system is consistent.
  double endpoint_guard = 1e-5;

  /// Positive constant in the regularized operator (basis is S-normalized).
  double alpha_reg = 1.0;

  int refine_steps = 2;

  int secular_max_iters = 200;
  double interp_guard = 1e-14;

  /// |phi(lambda_hat)| <= phi_tol_factor * (1 + |beta|) accepts lambda_hat.
  double phi_tol_factor = 1e-10;

  /// p* sign tolerance, relative to the magnitude of the endpoint data.
  double hard_case_tol = 1e-8;

  std::uint64_t seed = 0x9e3779b97f4a7c15ull;

  /// Secular acceleration switches; with all three off the iteration is
  /// plain bisection terminated by the width rule only.
  bool use_interpolation = true;
  bool use_primal_step = true;
  bool kkt_termination = true;
};

}  // namespace gtrs
