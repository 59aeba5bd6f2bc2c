#include "gtrs/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtrs/rng.hpp"

namespace gtrs {

namespace {

// S-orthogonalize w against the first m columns of v (sv = S v cached);
// repeated twice for stability. Returns the S-norm after orthogonalization.
double s_orthogonalize(const Eigen::MatrixXd& v, const Eigen::MatrixXd& sv, Eigen::Index m,
                       Vector& w, Vector& sw) {
  for (int pass = 0; pass < 2; ++pass) {
    if (m > 0) {
      Vector coeffs = sv.leftCols(m).transpose() * w;
      w.noalias() -= v.leftCols(m) * coeffs;
      sw.noalias() -= sv.leftCols(m) * coeffs;
    }
  }
  double sn2 = w.dot(sw);
  return sn2 > 0.0 ? std::sqrt(sn2) : 0.0;
}

Vector apply_s_inverse(const LinearOperator& s_op, const Vector& rhs, const EigOptions& opts) {
  Index max_iter = opts.inner_cg_max_iter > 0 ? opts.inner_cg_max_iter : 10 * s_op.dim();
  CgResult res = cg_solve(s_op, rhs, opts.inner_cg_tol, max_iter);
  if (res.stats.breakdown) {
    throw std::invalid_argument("min_gen_eig: metric operator is not positive definite");
  }
  return std::move(res.x);
}

}  // namespace

EigResult min_gen_eig(const LinearOperator& m_op, const LinearOperator& s_op, int k,
                      const EigOptions& opts) {
  const Index n = m_op.dim();
  if (s_op.dim() != n) throw std::invalid_argument("min_gen_eig: operator dimensions differ");
  if (k < 1) throw std::invalid_argument("min_gen_eig: k must be at least 1");
  if (k > n) throw std::invalid_argument("min_gen_eig: k exceeds the dimension");

  const Index block = std::min<Index>(n, k + std::max(1, opts.block_extra));
  Index cap = opts.subspace_cap > 0 ? opts.subspace_cap : std::max<Index>(6 * block, 32);
  cap = std::min<Index>(cap, n);
  // Thick restart: retaining a healthy margin of Ritz vectors beyond the
  // block keeps clustered eigenvalues converging after restarts; never fewer
  // than the block itself.
  const Index keep_target = std::max<Index>(block, std::min<Index>(cap / 2, block + 8));

  const double norm_m = operator_norm_estimate(m_op, 12, opts.seed ^ 0xa5a5a5a5ull);
  const double norm_s = operator_norm_estimate(s_op, 12, opts.seed ^ 0x5a5a5a5aull);

  Eigen::MatrixXd v(n, cap), sv(n, cap), mv(n, cap);
  Rng rng(opts.seed);

  // Appends w as a fresh S-orthonormal column; the cached products are
  // recomputed from the normalized vector so cache errors cannot accumulate
  // through the Gram-Schmidt updates.
  Index cols = 0;
  auto append_column = [&](Vector w) -> bool {
    const double wn = w.norm();
    Vector sw = s_op(w);
    double norm = s_orthogonalize(v, sv, cols, w, sw);
    if (norm <= 1e-8 * std::max(1.0, wn)) return false;
    v.col(cols) = w / norm;
    sv.col(cols) = s_op(v.col(cols));
    const double unit = v.col(cols).dot(sv.col(cols));
    if (!(std::abs(unit - 1.0) < 1e-6)) return false;
    mv.col(cols) = m_op(v.col(cols));
    ++cols;
    return true;
  };

  // Seed block: random vectors S-orthonormalized one by one.
  int salvage = 0;
  while (cols < block) {
    if (!append_column(rng.normal_vector(n))) {
      if (++salvage > 20) throw EigFailure("min_gen_eig: cannot build an S-orthonormal block", {});
    }
  }

  EigResult best;
  double best_worst_rel = std::numeric_limits<double>::infinity();
  int stalled_cycles = 0;

  for (int cycle = 1; cycle <= opts.max_cycles; ++cycle) {
    // Expand the subspace: S^{-1} M applied to every column in order,
    // starting from the leading Ritz vectors, fully reorthogonalized in the
    // S-inner product. Columns that vanish after orthogonalization (Krylov
    // breakdown, e.g. kernel directions of M) are replaced by random ones.
    bool exhausted = false;
    Index next_src = 0;
    while (cols < cap && !exhausted && next_src < cols) {
      if (!append_column(apply_s_inverse(s_op, mv.col(next_src), opts))) {
        if (!append_column(rng.normal_vector(n))) exhausted = true;
      }
      ++next_src;
    }

    // Rayleigh-Ritz on the current subspace.
    Eigen::MatrixXd h = v.leftCols(cols).transpose() * mv.leftCols(cols);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Index keep = std::min<Index>(keep_target, cols);
    Eigen::MatrixXd y = es.eigenvectors().leftCols(keep);
    Vector theta = es.eigenvalues().head(keep);

    Eigen::MatrixXd rx = v.leftCols(cols) * y;
    Eigen::MatrixXd rsx = sv.leftCols(cols) * y;
    Eigen::MatrixXd rmx = mv.leftCols(cols) * y;

    const Index kk = std::min<Index>(k, keep);
    Vector resnorm(kk), scales(kk);
    bool all_ok = true;
    double worst_rel = 0.0;
    for (Index i = 0; i < kk; ++i) {
      resnorm[i] = (rmx.col(i) - theta[i] * rsx.col(i)).norm();
      scales[i] = std::max(norm_m + std::abs(theta[i]) * norm_s, 1e-300);
      double required = opts.tol;
      if (opts.secondary_rel_threshold > 0.0 &&
          theta[i] > opts.secondary_rel_threshold * norm_m) {
        required = std::max(opts.tol, opts.secondary_tol);
      }
      double rel = resnorm[i] / scales[i] * (opts.tol / required);
      worst_rel = std::max(worst_rel, rel);
      if (resnorm[i] / scales[i] > required) all_ok = false;
    }

    if (worst_rel > 0.98 * best_worst_rel) {
      ++stalled_cycles;
    } else {
      stalled_cycles = 0;
    }
    if (worst_rel < best_worst_rel) {
      best_worst_rel = worst_rel;
      best.values = theta.head(kk);
      best.vectors = rx.leftCols(kk);
      best.residuals = resnorm;
      best.scales = scales;
      best.cycles = cycle;
      best.norm_m_estimate = norm_m;
      best.norm_s_estimate = norm_s;
    }
    if (all_ok) {
      best.converged = true;
      return best;
    }
    if (stalled_cycles >= 30) {
      throw EigFailure("min_gen_eig: residuals stalled at " + std::to_string(best_worst_rel) +
                           " after " + std::to_string(cycle) + " cycles",
                       best);
    }

    // Thick restart: keep the leading Ritz block with fresh products, so
    // cache drift cannot build up across cycles.
    v.leftCols(keep) = rx;
    cols = keep;
    for (Index i = 0; i < cols; ++i) {
      sv.col(i) = s_op(v.col(i));
      mv.col(i) = m_op(v.col(i));
    }
  }

  throw EigFailure("min_gen_eig: residual targets not met after " +
                       std::to_string(opts.max_cycles) + " cycles",
                   best);
}

NullspaceBasis nullspace_basis(const LinearOperator& p_op, const LinearOperator& s_op,
                               double rank_tol, int max_dim, const EigOptions& opts) {
  const Index n = p_op.dim();
  const int k = static_cast<int>(std::min<Index>(std::max(1, max_dim), n));
  // Only pairs near zero decide the rank; pairs clearly above the cutoff are
  // merely confirming the gap and may converge loosely.
  EigOptions split = opts;
  if (split.secondary_rel_threshold == 0.0) {
    split.secondary_rel_threshold = 100.0 * rank_tol;
    split.secondary_tol = 1e-5;
  }
  EigResult eig = min_gen_eig(p_op, s_op, k, split);

  const double norm_p = eig.norm_m_estimate;
  const double cutoff = rank_tol * std::max(norm_p, 1e-300);

  Index r = 0;
  while (r < eig.values.size() && eig.values[r] <= cutoff) ++r;
  if (r == 0) {
    throw NotSingularError(
        "nullspace_basis: endpoint not numerically singular (smallest pencil eigenvalue " +
        std::to_string(eig.values[0]) + " above cutoff " + std::to_string(cutoff) + ")");
  }

  NullspaceBasis basis;
  basis.z_metric = eig.vectors.leftCols(r);
  basis.eigenvalues = eig.values.head(r);
  basis.cutoff = cutoff;
  basis.norm_p_estimate = norm_p;

  // Euclidean-orthonormal variant of the same span, with a fixed sign
  // convention so results are reproducible.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.z_metric);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  for (Index j = 0; j < r; ++j) {
    Index imax = 0;
    q.col(j).cwiseAbs().maxCoeff(&imax);
    if (q(imax, j) < 0.0) q.col(j) = -q.col(j);
  }
  basis.z_euclid = q;
  return basis;
}

}  // namespace gtrs
