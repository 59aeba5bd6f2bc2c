#include "gtrs/linear_operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gtrs/rng.hpp"

namespace gtrs {

LinearOperator::LinearOperator(Index dim, ApplyFn apply, int matvecs_per_apply)
    : dim_(dim),
      apply_(std::move(apply)),
      cost_(matvecs_per_apply),
      counter_(std::make_shared<std::atomic<std::int64_t>>(0)) {}

void LinearOperator::apply(const Vector& x, Vector& y) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("LinearOperator: vector size " + std::to_string(x.size()) +
                                " != dimension " + std::to_string(dim_));
  }
  apply_(x, y);
  if (counter_) counter_->fetch_add(cost_, std::memory_order_relaxed);
}

Vector LinearOperator::operator()(const Vector& x) const {
  Vector y;
  apply(x, y);
  return y;
}

LinearOperator& LinearOperator::share_counter(const LinearOperator& other) {
  counter_ = other.counter_;
  return *this;
}

LinearOperator& LinearOperator::set_counter(MatvecCounter counter) {
  if (counter) counter_ = std::move(counter);
  return *this;
}

LinearOperator make_operator(const SparseSymmetric& m) {
  return LinearOperator(
      m.dim(), [&m](const Vector& x, Vector& y) { m.multiply(x, y); }, 1);
}

LinearOperator pencil_operator(const SparseSymmetric& a, const SparseSymmetric& b, double lambda) {
  if (a.dim() != b.dim()) throw std::invalid_argument("pencil_operator: dimension mismatch");
  return LinearOperator(
      a.dim(),
      [&a, &b, lambda](const Vector& x, Vector& y) {
        a.multiply(x, y);
        Vector t;
        b.multiply(x, t);
        y += lambda * t;
      },
      2);
}

LinearOperator low_rank_update_operator(LinearOperator base, Eigen::MatrixXd w, double alpha) {
  const Index n = base.dim();
  if (w.rows() != n) throw std::invalid_argument("low_rank_update_operator: dimension mismatch");
  LinearOperator op(
      n,
      [base, w = std::move(w), alpha](const Vector& x, Vector& y) {
        base.apply(x, y);
        if (w.cols() > 0) y.noalias() += alpha * (w * (w.transpose() * x));
      },
      0);
  op.share_counter(base);
  return op;
}

LinearOperator deflated_operator(LinearOperator base, Eigen::MatrixXd z) {
  const Index n = base.dim();
  if (z.rows() != n) throw std::invalid_argument("deflated_operator: dimension mismatch");
  LinearOperator op(
      n,
      [base, z = std::move(z)](const Vector& x, Vector& y) {
        Vector xp = x;
        if (z.cols() > 0) xp.noalias() -= z * (z.transpose() * x);
        base.apply(xp, y);
        if (z.cols() > 0) y.noalias() -= z * (z.transpose() * y);
      },
      0);
  op.share_counter(base);
  return op;
}

double operator_norm_estimate(const LinearOperator& op, int iterations, std::uint64_t seed) {
  Rng rng(seed);
  Vector v = rng.normal_vector(op.dim());
  double nv = v.norm();
  if (nv == 0.0 || op.dim() == 0) return 0.0;
  v /= nv;
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = op(v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    estimate = nw;
    v = w / nw;
  }
  return estimate;
}

}  // namespace gtrs
