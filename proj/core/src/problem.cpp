#include "gtrs/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gtrs {

void GtrsProblem::validate() const {
  const Index n = A.dim();
  if (B.dim() != n || a.size() != n || b.size() != n) {
    throw std::invalid_argument("GtrsProblem: A, B, a, b dimensions do not agree");
  }
  if (n < 1) throw std::invalid_argument("GtrsProblem: empty problem");
  if (!(lambda_hat >= 0.0)) {
    throw std::invalid_argument("GtrsProblem: lambda_hat must be nonnegative, got " +
                                std::to_string(lambda_hat));
  }
  if (!std::isfinite(beta)) throw std::invalid_argument("GtrsProblem: beta is not finite");
}

double eval_q(const GtrsProblem& prob, const Vector& x) {
  Vector ax = prob.A * x;
  return x.dot(ax) + 2.0 * prob.a.dot(x);
}

double eval_g(const GtrsProblem& prob, const Vector& x) {
  Vector bx = prob.B * x;
  return x.dot(bx) + 2.0 * prob.b.dot(x) + prob.beta;
}

KktReport kkt_residual(const GtrsProblem& prob, const Vector& x, double lambda,
                       std::optional<double> lower, std::optional<double> upper,
                       double interval_tol) {
  Vector ax = prob.A * x;
  Vector bx = prob.B * x;
  KktReport rep;
  rep.stationarity = (ax + lambda * bx + prob.a + lambda * prob.b).norm();
  rep.feasibility = x.dot(bx) + 2.0 * prob.b.dot(x) + prob.beta;
  rep.complementarity = std::abs(lambda * rep.feasibility);
  rep.multiplier_in_interval = lambda >= -interval_tol;
  if (lower && lambda < *lower - interval_tol) rep.multiplier_in_interval = false;
  if (upper && lambda > *upper + interval_tol) rep.multiplier_in_interval = false;
  return rep;
}

double success_metric(const KktReport& kkt, bool boundary) {
  double m = kkt.stationarity;
  if (boundary) m = std::max(m, std::abs(kkt.feasibility));
  return m;
}

}  // namespace gtrs
