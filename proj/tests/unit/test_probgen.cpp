#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gtrs/interval.hpp"
#include "gtrs/oracle.hpp"
#include "gtrs/probgen.hpp"
#include "gtrs/solver.hpp"
#include "helpers.hpp"

using namespace gtrs;
using namespace gtrs::probgen;

TEST_SUITE_BEGIN("probgen");

TEST_CASE("generation is bitwise deterministic") {
  GenSpec spec;
  spec.n = 30;
  spec.density = 0.2;
  spec.cond = 10.0;
  spec.case_kind = CaseRequest::Hard2;
  spec.class_kind = ClassKind::Class1;
  spec.seed = 123;

  GenArtifact first = generate(spec);
  GenArtifact second = generate(spec);

  CHECK(first.planted_lambda == second.planted_lambda);
  CHECK(first.problem.beta == second.problem.beta);
  CHECK((first.x0 - second.x0).norm() == 0.0);
  CHECK((first.problem.a - second.problem.a).norm() == 0.0);
  REQUIRE(first.problem.A.entries().size() == second.problem.A.entries().size());
  for (std::size_t i = 0; i < first.problem.A.entries().size(); ++i) {
    CHECK(first.problem.A.entries()[i].value == second.problem.A.entries()[i].value);
  }
}

TEST_CASE("conditioned 2x2 matrices are dense SPD with the requested spread") {
  SparseSymmetric m = rand_sparse_sym(2, 1.0, 10.0, 77);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  CHECK(cond >= 5.0);
  CHECK(cond <= 20.0);
}

TEST_CASE("degenerate density requests fall back to the diagonal minimum") {
  CHECK_THROWS_AS(rand_sparse_sym(10, 0.0, 10.0, 1), std::invalid_argument);
  bool raised = false;
  SparseSymmetric m = rand_sparse_sym(50, 1e-6, 10.0, 2, &raised);
  CHECK(raised);
  CHECK(m.stored_nonzeros() >= 50);
}

TEST_CASE("density target is met within a factor of two") {
  bool raised = false;
  SparseSymmetric m = rand_sparse_sym(100, 1e-2, 10.0, 3, &raised);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense());
  CHECK(es.eigenvalues().minCoeff() > 0.0);  // PD
  // Full-matrix nonzero count: stored triangle counts off-diagonals twice.
  Index full = 0;
  for (const auto& t : m.entries()) full += (t.row == t.col) ? 1 : 2;
  CHECK(full <= 2 * 100);
  CHECK(full >= 50);

  SparseSymmetric b = rand_sparse_sym(100, 1e-2, std::nullopt, 4);
  Index bfull = 0;
  for (const auto& t : b.entries()) bfull += (t.row == t.col) ? 1 : 2;
  CHECK(bfull <= 2 * 100);
}

TEST_CASE("class-1 artifacts have SPD A, lambda_hat 0 and b = 0") {
  GenSpec spec;
  spec.n = 40;
  spec.density = 0.2;
  spec.cond = 100.0;
  spec.case_kind = CaseRequest::Easy;
  spec.class_kind = ClassKind::Class1;
  spec.seed = 9;
  GenArtifact art = generate(spec);

  CHECK(art.problem.lambda_hat == 0.0);
  CHECK(art.problem.b.norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(art.problem.A.to_dense());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  // a = -(A + lambda B) x0 exactly.
  const Vector reconstructed =
      -(art.problem.A * art.x0 + art.planted_lambda * (art.problem.B * art.x0));
  CHECK((art.problem.a - reconstructed).norm() == 0.0);
  CHECK(art.planted_lambda > 0.0);
  CHECK(art.planted_lambda < art.lambda_up);
}

TEST_CASE("class-2 artifacts satisfy A + B = C positive definite and an interior plant") {
  GenSpec spec;
  spec.n = 35;
  spec.density = 0.2;
  spec.cond = 10.0;
  spec.case_kind = CaseRequest::Easy;
  spec.class_kind = ClassKind::Class2;
  spec.seed = 31;
  GenArtifact art = generate(spec);

  CHECK(art.problem.lambda_hat == 1.0);
  Eigen::MatrixXd c = art.problem.A.to_dense() + art.problem.B.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // Planted lambda lies inside the recomputed interval.
  SolverConfig cfg;
  MultiplierInterval interval =
      multiplier_interval(art.problem, cfg, {.lower = true, .upper = true});
  CHECK(art.planted_lambda >= interval.lower - 1e-8);
  CHECK(art.planted_lambda <= interval.upper + 1e-8);
}

TEST_CASE("hard-case-2 plants are consistent at the endpoint") {
  GenSpec spec;
  spec.n = 30;
  spec.density = 0.25;
  spec.cond = 10.0;
  spec.case_kind = CaseRequest::Hard2;
  spec.class_kind = ClassKind::Class1;
  spec.seed = 17;
  GenArtifact art = generate(spec);

  // Dense nullspace projection of a + lambda_up b.
  Eigen::MatrixXd pencil =
      art.problem.A.to_dense() + art.lambda_up * art.problem.B.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pencil);
  const Vector rhs = art.problem.a + art.lambda_up * art.problem.b;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i]) <= 1e-8 * es.eigenvalues().cwiseAbs().maxCoeff()) {
      CHECK(std::abs(es.eigenvectors().col(i).dot(rhs)) <= 1e-7 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("identity B turns a class-1 instance into one with an unbounded upper endpoint") {
  GenSpec spec;
  spec.n = 20;
  spec.density = 0.3;
  spec.cond = 10.0;
  spec.case_kind = CaseRequest::Easy;
  spec.class_kind = ClassKind::Class1;
  spec.seed = 3;
  GenArtifact art = generate(spec);

  GtrsProblem trs = art.problem;
  trs.B = SparseSymmetric::identity(spec.n);
  trs.beta = -1.0;
  SolverConfig cfg;
  MultiplierInterval interval = multiplier_interval(trs, cfg, {.lower = false, .upper = true});
  CHECK(!std::isfinite(interval.upper));
}

TEST_CASE("hard-case-2 plants classify as planted for most seeds") {
  int agree = 0;
  const int total = 10;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    GenSpec spec;
    spec.n = 50;
    spec.density = 0.1;
    spec.cond = 10.0;
    spec.case_kind = CaseRequest::Hard2;
    spec.class_kind = seed % 2 ? ClassKind::Class2 : ClassKind::Class1;
    spec.seed = 1000 + seed;
    GenArtifact art = generate(spec);
    GtrsOutcome out = solve(art.problem);
    if (out.case_kind == CaseKind::HardCase2Upper) ++agree;
  }
  CHECK(agree >= 9);
}

TEST_SUITE_END();
