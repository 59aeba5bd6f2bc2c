#include "gtrs/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gtrs {
namespace oracle {

namespace {

struct Coordinates {
  SimDiag sd;
  Vector a_hat;  ///< Q^T a
  Vector b_hat;  ///< Q^T b
  double beta;
  double lambda_hat;

  double phi(double lambda) const {
    double value = beta;
    for (Index i = 0; i < sd.d.size(); ++i) {
      const double denom = sd.d[i] + lambda * sd.e[i];
      const double y = -(a_hat[i] + lambda * b_hat[i]) / denom;
      value += sd.e[i] * y * y + 2.0 * b_hat[i] * y;
    }
    return value;
  }

  Vector y_of_lambda(double lambda) const {
    Vector y(sd.d.size());
    for (Index i = 0; i < sd.d.size(); ++i) {
      y[i] = -(a_hat[i] + lambda * b_hat[i]) / (sd.d[i] + lambda * sd.e[i]);
    }
    return y;
  }
};

struct EndpointAnalysis {
  std::vector<Index> null_set;
  bool consistent = false;
  double p_star = 0.0;
  Vector y;  ///< particular + reduced-optimal null coordinates
  double consistency_residual = 0.0;
  double consistency_threshold = 0.0;
};

// Exact endpoint analysis in diagonal coordinates: the null coordinates are
// those with d_i + lambda_e e_i ~ 0; over them g is separable and its
// extremum is attained at y_i = -b_hat_i / e_i.
EndpointAnalysis analyze_endpoint(const Coordinates& co, double lambda_e,
                                  const OracleOptions& opts) {
  EndpointAnalysis an;
  const Index n = co.sd.d.size();
  double worst = 0.0;
  Vector rhs = co.a_hat + lambda_e * co.b_hat;
  for (Index i = 0; i < n; ++i) {
    const double denom = co.sd.d[i] + lambda_e * co.sd.e[i];
    const double scale = std::abs(co.sd.d[i]) + std::abs(lambda_e * co.sd.e[i]) + 1e-300;
    if (std::abs(denom) <= 1e-10 * scale) an.null_set.push_back(i);
  }
  an.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    const bool in_null = std::find(an.null_set.begin(), an.null_set.end(), i) != an.null_set.end();
    if (in_null) {
      worst = std::max(worst, std::abs(rhs[i]));
      an.y[i] = -co.b_hat[i] / co.sd.e[i];
    } else {
      an.y[i] = -rhs[i] / (co.sd.d[i] + lambda_e * co.sd.e[i]);
    }
  }
  an.consistency_residual = worst;
  an.consistency_threshold = opts.range_test_tol * (1.0 + rhs.norm());
  an.consistent = !an.null_set.empty() && worst <= an.consistency_threshold;
  if (an.consistent) {
    double value = co.beta;
    for (Index i = 0; i < n; ++i) {
      value += co.sd.e[i] * an.y[i] * an.y[i] + 2.0 * co.b_hat[i] * an.y[i];
    }
    an.p_star = value;
  }
  return an;
}

// Root of phi on [lo, hi] by bisection, with the callers guaranteeing
// phi(lo) > 0 > phi(hi) (endpoint values may be virtual limits).
double bisect_root(const Coordinates& co, double lo, double hi, double width_tol) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = co.phi(mid);
    if (value > 0.0) {
      lo = mid;
    } else if (value < 0.0) {
      hi = mid;
    } else {
      return mid;
    }
    if ((hi - lo) <= width_tol * (std::abs(hi) + std::abs(lo) + 1e-300)) break;
  }
  return 0.5 * (lo + hi);
}

// Boundary step in coordinates along null index j.
void coordinate_boundary_step(const Coordinates& co, Vector& y, Index j, double p_star) {
  const double c2 = co.sd.e[j];
  const double c1 = c2 * y[j] + co.b_hat[j];
  double disc = c1 * c1 - c2 * p_star;
  if (disc < 0.0) disc = 0.0;
  const double sq = std::sqrt(disc);
  const double t = (c1 >= 0.0) ? -(c1 + sq) : (-c1 + sq);
  double alpha1 = (std::abs(c2) > 0.0) ? t / c2 : 0.0;
  double alpha2 = (t != 0.0) ? p_star / t : 0.0;
  // Same tie-break as the sparse path: smaller objective, then smaller norm.
  // Along a null direction the objective is flat, so the smaller |y_j + alpha|
  // decides.
  const double cand1 = y[j] + alpha1;
  const double cand2 = y[j] + alpha2;
  y[j] = (std::abs(cand1) <= std::abs(cand2)) ? cand1 : cand2;
}

}  // namespace

SimDiag simdiag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double lambda_hat) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("simdiag: matrices must be square and of equal size");
  }
  Eigen::MatrixXd s = a + lambda_hat * b;
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(s);
  const double smin = es_s.eigenvalues().minCoeff();
  if (!(smin > 0.0)) {
    throw std::invalid_argument("simdiag: A + lambda_hat B is not positive definite");
  }
  Eigen::MatrixXd s_inv_half = es_s.eigenvectors() *
                               es_s.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                               es_s.eigenvectors().transpose();
  Eigen::MatrixXd m = s_inv_half * b * s_inv_half;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(m);

  SimDiag sd;
  sd.q = s_inv_half * es_m.eigenvectors();
  sd.e = es_m.eigenvalues();
  sd.d = Vector::Ones(a.rows()) - lambda_hat * sd.e;
  return sd;
}

OracleResult dense_solve(const GtrsProblem& prob, const OracleOptions& opts) {
  prob.validate();
  if (prob.dim() > opts.dense_threshold) {
    throw std::invalid_argument("oracle::dense_solve: dimension " + std::to_string(prob.dim()) +
                                " above the dense threshold " +
                                std::to_string(opts.dense_threshold));
  }

  Coordinates co;
  co.sd = simdiag(prob.A.to_dense(), prob.B.to_dense(), prob.lambda_hat);
  co.a_hat = co.sd.q.transpose() * prob.a;
  co.b_hat = co.sd.q.transpose() * prob.b;
  co.beta = prob.beta;
  co.lambda_hat = prob.lambda_hat;

  OracleResult result;
  GtrsOutcome& out = result.outcome;

  double lambda_low = -std::numeric_limits<double>::infinity();
  double lambda_up = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < co.sd.e.size(); ++i) {
    if (co.sd.e[i] > 0.0) lambda_low = std::max(lambda_low, -co.sd.d[i] / co.sd.e[i]);
    if (co.sd.e[i] < 0.0) lambda_up = std::min(lambda_up, -co.sd.d[i] / co.sd.e[i]);
  }
  out.interval.lower = lambda_low;
  out.interval.upper = lambda_up;
  out.interval.lower_computed = true;
  out.interval.upper_computed = true;

  auto finalize = [&](CaseKind kind, const Vector& y, double lambda) {
    out.case_kind = kind;
    out.x_star = co.sd.q * y;
    out.lambda_star = lambda;
    std::optional<double> lo, hi;
    if (std::isfinite(lambda_low)) lo = std::max(0.0, lambda_low);
    if (std::isfinite(lambda_up)) hi = lambda_up;
    out.kkt = kkt_residual(prob, out.x_star, lambda, lo, hi, 1e-6 * (1.0 + std::abs(lambda)));
    const bool boundary = kind != CaseKind::Interior;
    out.metric = success_metric(out.kkt, boundary);
    out.success = out.metric < opts.kkt_tol && (boundary || out.kkt.feasibility <= opts.kkt_tol);
    out.best_objective = eval_q(prob, out.x_star);
  };

  const double phi_hat = co.phi(prob.lambda_hat);
  const double phi_tol = opts.phi_tol_factor * (1.0 + std::abs(prob.beta));
  if (std::abs(phi_hat) <= phi_tol) {
    finalize(CaseKind::ExactAtLambdaHat, co.y_of_lambda(prob.lambda_hat), prob.lambda_hat);
    result.classification_margin = 0.0;
    return result;
  }

  auto interior_root_margin = [&](double lambda_star) {
    double margin = std::abs(lambda_star - prob.lambda_hat);
    const double lo = std::max(0.0, lambda_low);
    margin = std::min(margin, lambda_star - lo);
    if (std::isfinite(lambda_up)) margin = std::min(margin, lambda_up - lambda_star);
    return std::max(margin, 0.0);
  };

  if (phi_hat > 0.0) {
    if (!std::isfinite(lambda_up)) {
      double hi = std::max(1.0, std::abs(prob.lambda_hat));
      double lo = prob.lambda_hat;
      for (int k = 0; k <= 200 && co.phi(prob.lambda_hat + hi) > 0.0; ++k) {
        lo = prob.lambda_hat + hi;
        hi *= 2.0;
        if (k == 200) throw std::runtime_error("oracle: no sign change found (upper endpoint infinite)");
      }
      const double root = bisect_root(co, lo, prob.lambda_hat + hi, opts.width_tol);
      finalize(CaseKind::BoundaryEasy, co.y_of_lambda(root), root);
      result.classification_margin = interior_root_margin(root);
      return result;
    }
    EndpointAnalysis an = analyze_endpoint(co, lambda_up, opts);
    if (an.consistent) {
      result.p_star = an.p_star;
      const double p_tol = opts.hard_case_tol * (1.0 + std::abs(prob.beta));
      if (an.p_star >= -p_tol) {
        Vector y = an.y;
        coordinate_boundary_step(co, y, an.null_set.front(), an.p_star);
        finalize(CaseKind::HardCase2Upper, y, lambda_up);
        result.classification_margin =
            std::min(std::abs(an.p_star), std::abs(lambda_up - prob.lambda_hat));
        return result;
      }
      const double root = bisect_root(co, prob.lambda_hat, lambda_up, opts.width_tol);
      finalize(CaseKind::HardCase1, co.y_of_lambda(root), root);
      result.classification_margin =
          std::min(interior_root_margin(root), std::abs(an.p_star));
      return result;
    }
    const double root = bisect_root(co, prob.lambda_hat, lambda_up, opts.width_tol);
    finalize(CaseKind::BoundaryEasy, co.y_of_lambda(root), root);
    double margin = interior_root_margin(root);
    if (an.consistency_residual < 10.0 * an.consistency_threshold) margin = 0.0;
    result.classification_margin = margin;
    return result;
  }

  // phi(lambda_hat) < 0.
  if (lambda_low < 0.0) {
    Vector y_unc(co.sd.d.size());
    for (Index i = 0; i < co.sd.d.size(); ++i) y_unc[i] = -co.a_hat[i] / co.sd.d[i];
    double g_unc = co.beta;
    for (Index i = 0; i < co.sd.d.size(); ++i) {
      g_unc += co.sd.e[i] * y_unc[i] * y_unc[i] + 2.0 * co.b_hat[i] * y_unc[i];
    }
    if (g_unc <= 0.0) {
      finalize(CaseKind::Interior, y_unc, 0.0);
      result.classification_margin = std::abs(g_unc);
      return result;
    }
    const double root = bisect_root(co, 0.0, prob.lambda_hat, opts.width_tol);
    finalize(CaseKind::BoundaryEasy, co.y_of_lambda(root), root);
    result.classification_margin = std::min(interior_root_margin(root), std::abs(g_unc));
    return result;
  }

  EndpointAnalysis an = analyze_endpoint(co, lambda_low, opts);
  if (an.consistent) {
    result.p_star = an.p_star;
    const double p_tol = opts.hard_case_tol * (1.0 + std::abs(prob.beta));
    if (an.p_star <= p_tol) {
      Vector y = an.y;
      coordinate_boundary_step(co, y, an.null_set.front(), an.p_star);
      finalize(CaseKind::HardCase2Lower, y, lambda_low);
      result.classification_margin =
          std::min(std::abs(an.p_star), std::abs(prob.lambda_hat - lambda_low));
      return result;
    }
    const double root = bisect_root(co, lambda_low, prob.lambda_hat, opts.width_tol);
    finalize(CaseKind::HardCase1, co.y_of_lambda(root), root);
    result.classification_margin = std::min(interior_root_margin(root), std::abs(an.p_star));
    return result;
  }
  const double root = bisect_root(co, lambda_low, prob.lambda_hat, opts.width_tol);
  finalize(CaseKind::BoundaryEasy, co.y_of_lambda(root), root);
  double margin = interior_root_margin(root);
  if (an.consistency_residual < 10.0 * an.consistency_threshold) margin = 0.0;
  result.classification_margin = margin;
  return result;
}

double accuracy(double q_x_star, double q_x_best, bool* absolute_fallback) {
  if (absolute_fallback) *absolute_fallback = false;
  if (std::abs(q_x_best) < 1e-300) {
    if (absolute_fallback) *absolute_fallback = true;
    return q_x_star - q_x_best;
  }
  return (q_x_star - q_x_best) / std::abs(q_x_best);
}

}  // namespace oracle
}  // namespace gtrs
