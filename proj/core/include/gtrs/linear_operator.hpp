// Matrix-free symmetric operators and the operator algebra the solver needs.
#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

#include "gtrs/sparse_matrix.hpp"

namespace gtrs {

/// Shared tally of sparse matrix-vector products.
using MatvecCounter = std::shared_ptr<std::atomic<std::int64_t>>;

inline MatvecCounter make_matvec_counter() {
  return std::make_shared<std::atomic<std::int64_t>>(0);
}

/// Deterministic symmetric map x -> Op x. Copies share the application
/// counter, so every operator derived from one solve can be tied to a single
/// matvec budget (each SparseSymmetric product counts once).
class LinearOperator {
 public:
  using ApplyFn = std::function<void(const Vector&, Vector&)>;

  LinearOperator() = default;
  LinearOperator(Index dim, ApplyFn apply, int matvecs_per_apply = 1);

  Index dim() const { return dim_; }

  void apply(const Vector& x, Vector& y) const;
  Vector operator()(const Vector& x) const;

  /// Total sparse matvecs performed through this operator (and its copies).
  std::int64_t matvec_count() const { return counter_ ? counter_->load() : 0; }

  /// Reuse an existing counter so several operators share one tally.
  LinearOperator& share_counter(const LinearOperator& other);
  LinearOperator& set_counter(MatvecCounter counter);

  MatvecCounter counter() const { return counter_; }

 private:
  Index dim_ = 0;
  ApplyFn apply_;
  int cost_ = 1;
  MatvecCounter counter_;
};

/// View of a sparse matrix as an operator (one matvec per application).
LinearOperator make_operator(const SparseSymmetric& m);

/// A + lambda * B applied matrix-free (two matvecs per application).
LinearOperator pencil_operator(const SparseSymmetric& a, const SparseSymmetric& b, double lambda);

/// base + alpha * sum_i w_i w_i^T with dense columns w_i.
LinearOperator low_rank_update_operator(LinearOperator base, Eigen::MatrixXd w, double alpha);

/// P_Z base P_Z with P_Z = I - Z Z^T for Euclidean-orthonormal Z.
LinearOperator deflated_operator(LinearOperator base, Eigen::MatrixXd z);

/// Two-norm estimate by power iteration with a deterministic start.
double operator_norm_estimate(const LinearOperator& op, int iterations = 12,
                              std::uint64_t seed = 0x6a09e667f3bcc908ull);

}  // namespace gtrs
