// Sparse symmetric matrices stored as the upper triangle in coordinate form.
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace gtrs {

using Vector = Eigen::VectorXd;
using Index = std::int64_t;

/// One stored entry of the upper triangle (row <= col).
struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// Symmetric matrix holding each off-diagonal pair once. Construction sorts
/// entries by (row, col), folds (i, j) with i > j into (j, i), sums
/// duplicates and drops exact zeros, so matvec traverses a fixed order and
/// results are reproducible run to run.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;
  SparseSymmetric(Index n, std::vector<Triplet> entries);

  static SparseSymmetric identity(Index n);
  static SparseSymmetric diagonal(const Vector& d);
  static SparseSymmetric zero(Index n) { return SparseSymmetric(n, {}); }

  Index dim() const { return n_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  Index stored_nonzeros() const { return static_cast<Index>(entries_.size()); }

  /// y = M x with the symmetric expansion of the stored triangle.
  void multiply(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;

  /// this + coeff * other, dimensions must agree.
  SparseSymmetric axpy(double coeff, const SparseSymmetric& other) const;

  Eigen::MatrixXd to_dense() const;

 private:
  Index n_ = 0;
  std::vector<Triplet> entries_;
};

}  // namespace gtrs
