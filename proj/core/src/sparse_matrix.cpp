#include "gtrs/sparse_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gtrs {

SparseSymmetric::SparseSymmetric(Index n, std::vector<Triplet> entries) : n_(n) {
  if (n < 0) throw std::invalid_argument("SparseSymmetric: negative dimension");
  for (auto& t : entries) {
    if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n) {
      throw std::invalid_argument("SparseSymmetric: entry (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ") outside " + std::to_string(n) +
                                  "x" + std::to_string(n));
    }
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  entries_.reserve(entries.size());
  for (const auto& t : entries) {
    if (!entries_.empty() && entries_.back().row == t.row && entries_.back().col == t.col) {
      entries_.back().value += t.value;
    } else {
      entries_.push_back(t);
    }
  }
  std::erase_if(entries_, [](const Triplet& t) { return t.value == 0.0; });
}

SparseSymmetric SparseSymmetric::identity(Index n) {
  std::vector<Triplet> ts(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = {i, i, 1.0};
  return SparseSymmetric(n, std::move(ts));
}

SparseSymmetric SparseSymmetric::diagonal(const Vector& d) {
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) ts.push_back({i, i, d[i]});
  return SparseSymmetric(d.size(), std::move(ts));
}

void SparseSymmetric::multiply(const Vector& x, Vector& y) const {
  if (x.size() != n_) {
    throw std::invalid_argument("SparseSymmetric::multiply: vector size " +
                                std::to_string(x.size()) + " != dimension " + std::to_string(n_));
  }
  y.setZero(n_);
  for (const auto& t : entries_) {
    y[t.row] += t.value * x[t.col];
    if (t.row != t.col) y[t.col] += t.value * x[t.row];
  }
}

Vector SparseSymmetric::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

SparseSymmetric SparseSymmetric::axpy(double coeff, const SparseSymmetric& other) const {
  if (other.n_ != n_) throw std::invalid_argument("SparseSymmetric::axpy: dimension mismatch");
  std::vector<Triplet> merged = entries_;
  merged.reserve(entries_.size() + other.entries_.size());
  for (const auto& t : other.entries_) merged.push_back({t.row, t.col, coeff * t.value});
  return SparseSymmetric(n_, std::move(merged));
}

Eigen::MatrixXd SparseSymmetric::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& t : entries_) {
    m(t.row, t.col) += t.value;
    if (t.row != t.col) m(t.col, t.row) += t.value;
  }
  return m;
}

}  // namespace gtrs
