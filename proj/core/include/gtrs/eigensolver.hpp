// Smallest eigenpairs of a symmetric pencil (M, S) with S positive definite,
// matrix-free: restarted Rayleigh-Ritz over Krylov subspaces of S^{-1} M,
// with S applied through CG solves. Also the numerical null-space bases the
// endpoint logic needs.
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>

#include "gtrs/cg.hpp"
#include "gtrs/linear_operator.hpp"

namespace gtrs {

struct EigOptions {
  double tol = 1e-10;   ///< residual tolerance, relative to ||M|| + |theta| ||S||
  int max_cycles = 200;
  int block_extra = 2;  ///< Ritz vectors kept beyond the requested k
  int subspace_cap = 0; ///< 0 = automatic
  std::uint64_t seed = 0x51ed2701a3b5cd8full;
  double inner_cg_tol = 1e-8;
  Index inner_cg_max_iter = 0;  ///< 0 = 10 n
  /// Pairs with theta above secondary_rel_threshold * ||M|| only need
  /// secondary_tol; null-space searches use this to avoid polishing pairs
  /// that are clearly away from zero. Zero disables the split.
  double secondary_tol = 0.0;
  double secondary_rel_threshold = 0.0;
};

struct EigResult {
  Vector values;            ///< ascending, size k
  Eigen::MatrixXd vectors;  ///< n x k, S-orthonormal (v_i^T S v_j = delta_ij)
  Vector residuals;         ///< ||M v_i - theta_i S v_i||
  Vector scales;            ///< convergence scale per pair
  bool converged = false;
  int cycles = 0;
  double norm_m_estimate = 0.0;
  double norm_s_estimate = 0.0;
};

class EigFailure : public std::runtime_error {
 public:
  EigFailure(const std::string& what, EigResult best)
      : std::runtime_error(what), best_result(std::move(best)) {}
  EigResult best_result;
};

/// k algebraically smallest eigenpairs of (M, S). Throws EigFailure with the
/// best pairs found when the residual targets are not met.
EigResult min_gen_eig(const LinearOperator& m_op, const LinearOperator& s_op, int k,
                      const EigOptions& opts = {});

struct NullspaceBasis {
  Eigen::MatrixXd z_metric;  ///< S-orthonormal columns spanning the null space
  Eigen::MatrixXd z_euclid;  ///< Euclidean-orthonormal columns, same span
  Vector eigenvalues;        ///< pencil eigenvalues of the accepted columns
  double cutoff = 0.0;       ///< eigenvalue acceptance threshold used
  double norm_p_estimate = 0.0;
};

/// No pencil eigenvalue cleared the rank cutoff: the supposed endpoint is not
/// numerically singular, usually because it was computed too loosely.
class NotSingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical null space of a singular PSD operator P, as the eigenvectors of
/// the pencil (P, S) with eigenvalue below rank_tol * ||P||. Throws
/// NotSingularError if no eigenvalue clears the cutoff and EigFailure if the
/// eigensolver fails.
NullspaceBasis nullspace_basis(const LinearOperator& p_op, const LinearOperator& s_op,
                               double rank_tol, int max_dim, const EigOptions& opts = {});

}  // namespace gtrs
