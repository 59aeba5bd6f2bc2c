#include "gtrs/cg.hpp"

#include <cmath>
#include <stdexcept>

namespace gtrs {

namespace {

using Projector = std::function<void(Vector&)>;

CgResult cg_impl(const LinearOperator& op, const Vector& rhs, double tol, Index max_iter,
                 const Vector& x0, const Projector& project, const CgCallback& on_iterate) {
  if (rhs.size() != op.dim()) throw std::invalid_argument("cg_solve: rhs dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tolerance must be positive");

  const Index n = op.dim();
  Vector b = rhs;
  if (project) project(b);
  const double target = tol * std::max(1.0, b.norm());

  Vector x;
  Vector r;
  if (x0.size() == 0) {
    x = Vector::Zero(n);
    r = b;
  } else {
    if (x0.size() != n) throw std::invalid_argument("cg_solve: x0 dimension mismatch");
    x = x0;
    if (project) project(x);
    r = b - op(x);
    if (project) project(r);
  }

  CgStats stats;
  double rnorm = r.norm();
  Vector best_x = x;
  double best_rnorm = rnorm;

  if (rnorm <= target) {
    stats.converged = true;
    stats.final_residual_norm = rnorm;
    return {std::move(x), stats};
  }

  Vector p = r;
  double rho = r.squaredNorm();

  for (Index it = 1; it <= max_iter; ++it) {
    Vector ap = op(p);
    if (project) project(ap);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0)) {
      stats.breakdown = true;
      stats.iterations = it;
      stats.final_residual_norm = best_rnorm;
      return {std::move(best_x), stats};
    }
    const double alpha = rho / curvature;
    x += alpha * p;
    r -= alpha * ap;
    if (project) {
      project(x);
      project(r);
    }
    rnorm = r.norm();
    stats.iterations = it;
    if (on_iterate) on_iterate(it, x);
    if (rnorm < best_rnorm) {
      best_rnorm = rnorm;
      best_x = x;
    }
    if (rnorm <= target) {
      stats.converged = true;
      stats.final_residual_norm = rnorm;
      return {std::move(x), stats};
    }
    const double rho_next = r.squaredNorm();
    p = r + (rho_next / rho) * p;
    rho = rho_next;
  }

  stats.final_residual_norm = best_rnorm;
  return {std::move(best_x), stats};
}

}  // namespace

CgResult cg_solve(const LinearOperator& op, const Vector& rhs, double tol, Index max_iter,
                  const Vector& x0, const CgCallback& on_iterate) {
  return cg_impl(op, rhs, tol, max_iter, x0, nullptr, on_iterate);
}

CgResult deflated_cg_solve(const LinearOperator& op, const Vector& rhs, const Eigen::MatrixXd& z,
                           double tol, Index max_iter) {
  if (z.rows() != op.dim()) throw std::invalid_argument("deflated_cg_solve: basis dimension mismatch");
  Projector project = nullptr;
  if (z.cols() > 0) {
    project = [&z](Vector& v) { v.noalias() -= z * (z.transpose() * v); };
  }
  return cg_impl(op, rhs, tol, max_iter, Vector(), project, nullptr);
}

}  // namespace gtrs
