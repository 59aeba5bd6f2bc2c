#include "gtrs/probgen.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gtrs/cg.hpp"
#include "gtrs/interval.hpp"
#include "gtrs/rng.hpp"

namespace gtrs {
namespace probgen {

std::string to_string(CaseRequest value) {
  switch (value) {
    case CaseRequest::Easy: return "easy";
    case CaseRequest::Hard1: return "hard1";
    case CaseRequest::Hard2: return "hard2";
  }
  return "easy";
}

std::string to_string(ClassKind value) {
  return value == ClassKind::Class1 ? "1" : "2";
}

std::optional<CaseRequest> case_from_string(const std::string& text) {
  if (text == "easy") return CaseRequest::Easy;
  if (text == "hard1") return CaseRequest::Hard1;
  if (text == "hard2") return CaseRequest::Hard2;
  return std::nullopt;
}

std::optional<ClassKind> class_from_string(const std::string& text) {
  if (text == "1" || text == "class1") return ClassKind::Class1;
  if (text == "2" || text == "class2") return ClassKind::Class2;
  return std::nullopt;
}

void GenSpec::validate() const {
  if (n < 2) throw std::invalid_argument("GenSpec: n must be at least 2");
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("GenSpec: density must lie in (0, 1]");
  }
  if (!(cond >= 1.0)) throw std::invalid_argument("GenSpec: cond must be at least 1");
}

namespace {

// Symmetric matrix under construction, both triangles stored for cheap row
// access during plane rotations.
class RowMatrix {
 public:
  explicit RowMatrix(Index n) : rows_(static_cast<std::size_t>(n)), n_(n) {}

  double get(Index i, Index j) const {
    const auto& row = rows_[static_cast<std::size_t>(i)];
    auto it = row.find(j);
    return it == row.end() ? 0.0 : it->second;
  }

  void set(Index i, Index j, double value) {
    rows_[static_cast<std::size_t>(i)][j] = value;
    rows_[static_cast<std::size_t>(j)][i] = value;
  }

  Index nnz_full() const {
    Index count = 0;
    for (const auto& row : rows_) count += static_cast<Index>(row.size());
    return count;
  }

  // A <- G^T A G for the plane rotation G acting on coordinates (i, j).
  void rotate(Index i, Index j, double c, double s) {
    const auto gi = rows_[static_cast<std::size_t>(i)];
    const auto gj = rows_[static_cast<std::size_t>(j)];
    const double aii = get(i, i);
    const double ajj = get(j, j);
    const double aij = get(i, j);

    std::vector<Index> keys;
    keys.reserve(gi.size() + gj.size());
    for (const auto& [k, _] : gi) {
      if (k != i && k != j) keys.push_back(k);
    }
    for (const auto& [k, _] : gj) {
      if (k != i && k != j && gi.find(k) == gi.end()) keys.push_back(k);
    }
    for (Index k : keys) {
      const double aik = get(i, k);
      const double ajk = get(j, k);
      set(i, k, c * aik + s * ajk);
      set(j, k, -s * aik + c * ajk);
    }
    set(i, i, c * c * aii + 2.0 * c * s * aij + s * s * ajj);
    set(j, j, s * s * aii - 2.0 * c * s * aij + c * c * ajj);
    set(i, j, c * s * (ajj - aii) + (c * c - s * s) * aij);
  }

  SparseSymmetric to_sparse() const {
    std::vector<Triplet> ts;
    for (Index i = 0; i < n_; ++i) {
      for (const auto& [j, value] : rows_[static_cast<std::size_t>(i)]) {
        if (j >= i && value != 0.0) ts.push_back({i, j, value});
      }
    }
    return SparseSymmetric(n_, std::move(ts));
  }

 private:
  std::vector<std::unordered_map<Index, double>> rows_;
  Index n_;
};

}  // namespace

SparseSymmetric rand_sparse_sym(Index n, double density, std::optional<double> cond,
                                std::uint64_t seed, bool* density_raised) {
  if (n < 1) throw std::invalid_argument("rand_sparse_sym: n must be positive");
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("rand_sparse_sym: density must lie in (0, 1]");
  }
  if (density_raised) *density_raised = false;

  double target_full = density * static_cast<double>(n) * static_cast<double>(n);
  if (target_full < static_cast<double>(n)) {
    target_full = static_cast<double>(n);
    if (density_raised) *density_raised = true;
  }

  Rng rng(seed);

  if (cond) {
    if (*cond < 1.0) throw std::invalid_argument("rand_sparse_sym: cond must be at least 1");
    // Log-uniform spectrum in [1/cond, 1], extremes pinned, rotated by random
    // sparse plane rotations until the density target is reached.
    RowMatrix m(n);
    const double lo = std::log(1.0 / *cond);
    m.set(0, 0, 1.0 / *cond);
    if (n > 1) m.set(n - 1, n - 1, 1.0);
    for (Index i = 1; i + 1 < n; ++i) m.set(i, i, std::exp(lo * (1.0 - rng.uniform01())));

    const auto budget = static_cast<Index>(std::ceil(target_full / 2.0));
    for (Index r = 0; r < budget && m.nnz_full() < static_cast<Index>(target_full); ++r) {
      Index i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      Index j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      m.rotate(i, j, std::cos(theta), std::sin(theta));
    }
    return m.to_sparse();
  }

  // Indefinite: random pattern, uniform [-1, 1] values, duplicates folded by
  // the SparseSymmetric constructor.
  const auto pairs = static_cast<Index>(std::ceil(target_full / 2.0));
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(pairs));
  for (Index p = 0; p < pairs; ++p) {
    Index i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    Index j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    if (i > j) std::swap(i, j);
    ts.push_back({i, j, rng.uniform(-1.0, 1.0)});
  }
  return SparseSymmetric(n, std::move(ts));
}

namespace {

Vector solve_spd(const SparseSymmetric& m, const Vector& rhs, const SolverConfig& cfg) {
  LinearOperator op = make_operator(m);
  CgResult res = cg_solve(op, rhs, std::min(cfg.cg_tol, 1e-12), 20 * m.dim());
  if (res.stats.breakdown) {
    throw std::runtime_error("probgen: matrix expected positive definite is not");
  }
  return std::move(res.x);
}

}  // namespace

GenArtifact generate(const GenSpec& spec, const GenOptions& opts) {
  spec.validate();
  Rng root(spec.seed);
  // Fold every spec field into the stream so distinct specs decorrelate.
  std::uint64_t mix = spec.seed;
  mix ^= splitmix64(mix) + static_cast<std::uint64_t>(spec.n);
  mix ^= splitmix64(mix) + static_cast<std::uint64_t>(spec.case_kind);
  mix ^= splitmix64(mix) + static_cast<std::uint64_t>(spec.class_kind) * 7919;
  Rng stream(mix);

  const bool class1 = spec.class_kind == ClassKind::Class1;
  const double lambda_hat = class1 ? 0.0 : 1.0;

  GenArtifact art;
  art.expected_case = spec.case_kind;

  SparseSymmetric spd =
      rand_sparse_sym(spec.n, spec.density, spec.cond, stream.fork(1).next_u64(),
                      &art.density_raised);

  for (int attempt = 0; attempt <= opts.retry_budget; ++attempt) {
    art.retries = attempt;
    Rng draw = stream.fork(100 + static_cast<std::uint64_t>(attempt));

    bool raised_b = false;
    SparseSymmetric b_mat =
        rand_sparse_sym(spec.n, spec.density, std::nullopt, draw.fork(2).next_u64(), &raised_b);
    art.density_raised = art.density_raised || raised_b;

    SparseSymmetric a_mat = class1 ? spd : spd.axpy(-1.0, b_mat);

    GtrsProblem shell{a_mat, b_mat, Vector::Zero(spec.n), Vector::Zero(spec.n), 0.0, lambda_hat};
    IntervalRequest req;
    req.upper = true;
    req.lower = !class1;  // class 2 draws the planted lambda from (lower, upper)
    MultiplierInterval interval;
    try {
      interval = multiplier_interval(shell, opts.solver, req);
    } catch (const std::exception&) {
      continue;  // eigensolver trouble; redraw B
    }
    if (!interval.has_finite_upper()) continue;
    if (!class1 && !std::isfinite(interval.lower)) continue;

    art.lambda_low = interval.lower;
    art.lambda_up = interval.upper;

    Vector x0 = draw.fork(3).normal_vector(spec.n) / 10.0;

    double lambda;
    if (spec.case_kind == CaseRequest::Easy) {
      lambda = class1 ? draw.fork(4).uniform(0.0, interval.upper)
                      : draw.fork(4).uniform(interval.lower, interval.upper);
    } else {
      lambda = interval.upper;
    }

    Vector a_vec = -(a_mat * x0 + lambda * (b_mat * x0));

    Vector x_c = class1 ? solve_spd(a_mat, -a_vec, opts.solver) : solve_spd(spd, -a_vec, opts.solver);
    const double s = x_c.dot(b_mat * x_c);
    const double ell = x0.dot(b_mat * x0);

    double beta;
    const double gap_tol = 1e-12 * (1.0 + std::abs(s) + std::abs(ell));
    if (spec.case_kind == CaseRequest::Hard2) {
      if (s - ell <= gap_tol) continue;  // degenerate plant
      beta = -ell;
    } else if (spec.case_kind == CaseRequest::Hard1) {
      if (s - ell <= gap_tol) continue;
      beta = draw.fork(5).uniform(-s, -ell);
    } else {
      if (class1) {
        if (s - ell <= gap_tol) continue;  // beta interval empty
        beta = draw.fork(5).uniform(-s, -ell);
      } else {
        if (std::abs(s - ell) <= gap_tol) continue;
        beta = s > ell ? draw.fork(5).uniform(-s, -ell) : draw.fork(5).uniform(-ell, -s);
      }
    }

    art.problem = GtrsProblem{std::move(a_mat), std::move(b_mat), std::move(a_vec),
                              Vector::Zero(spec.n), beta, lambda_hat};
    art.planted_lambda = lambda;
    art.x0 = std::move(x0);
    return art;
  }
  throw std::runtime_error("probgen::generate: retry budget exhausted for seed " +
                           std::to_string(spec.seed));
}

}  // namespace probgen
}  // namespace gtrs
