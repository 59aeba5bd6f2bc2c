#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gtrs/oracle.hpp"
#include "gtrs/probgen.hpp"
#include "gtrs/solver.hpp"
#include "helpers.hpp"

using namespace gtrs;

TEST_SUITE_BEGIN("gtrs");

TEST_CASE("worked example end to end: hard case 2 at the lower endpoint") {
  GtrsProblem prob = testing::example1();
  GtrsOutcome out = solve(prob);

  CHECK(out.case_kind == CaseKind::HardCase2Lower);
  CHECK(out.lambda_star == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(out.x_star[0] == doctest::Approx(-25.0 + std::sqrt(457.0)).epsilon(1e-9));
  CHECK(out.x_star[1] == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(out.success);
  CHECK(out.metric < 1e-8);

  REQUIRE(out.hard_case.has_value());
  CHECK(out.hard_case->p_star == doctest::Approx(-914.0).epsilon(1e-8));
  // The naive test would have misclassified: g at the particular solution is
  // positive although the instance is hard case 2.
  CHECK(out.hard_case->g_particular == doctest::Approx(336.0).epsilon(1e-8));
  CHECK(out.hard_case->is_hard_case_2);
}

TEST_CASE("feasible unconstrained minimum is returned as interior") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(4);
  prob.B = SparseSymmetric::identity(4);
  prob.a = Vector::Zero(4);
  prob.b = Vector::Zero(4);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  GtrsOutcome out = solve(prob);
  CHECK(out.case_kind == CaseKind::Interior);
  CHECK(out.lambda_star == 0.0);
  CHECK(out.x_star.norm() <= 1e-12);
  CHECK(out.success);
}

TEST_CASE("eval_phi reproduces the worked example value at lambda_hat") {
  GtrsProblem prob = testing::example1();
  SolverConfig cfg;
  PhiEval ev = eval_phi(prob, 0.75, cfg);
  CHECK(ev.x[0] == doctest::Approx(-25.0).epsilon(1e-10));
  CHECK(ev.x[1] == doctest::Approx(-9.0).epsilon(1e-10));
  CHECK(ev.phi == doctest::Approx(-1781.0).epsilon(1e-10));
  CHECK(ev.phi < 0.0);
}

TEST_CASE("phi is constant beta when the linear terms vanish") {
  GtrsProblem prob = testing::example1();
  prob.a.setZero();
  prob.b.setZero();
  prob.beta = -7.0;
  SolverConfig cfg;
  for (double lambda : {0.55, 0.65, 0.75, 0.9}) {
    PhiEval ev = eval_phi(prob, lambda, cfg);
    CHECK(ev.x.norm() <= 1e-12);
    CHECK(ev.phi == doctest::Approx(-7.0));
  }
}

TEST_CASE("eval_phi matches the dense oracle on random instances") {
  for (std::uint32_t seed : {6u, 16u}) {
    const Index n = 12;
    Eigen::MatrixXd bd = testing::random_symmetric(n, seed);
    Eigen::MatrixXd ad = testing::random_spd(n, seed + 2) - 0.5 * bd;
    GtrsProblem prob;
    prob.A = testing::from_dense(ad);
    prob.B = testing::from_dense(bd);
    prob.a = testing::random_vector(n, seed + 3);
    prob.b = testing::random_vector(n, seed + 4);
    prob.beta = -1.0;
    prob.lambda_hat = 0.5;
    SolverConfig cfg;
    PhiEval ev = eval_phi(prob, 0.5, cfg);
    const Vector x = (ad + 0.5 * bd).ldlt().solve(-(prob.a + 0.5 * prob.b));
    const double phi = x.dot(bd * x) + 2.0 * prob.b.dot(x) + prob.beta;
    CHECK(ev.phi == doctest::Approx(phi).epsilon(1e-8));
  }
}

TEST_CASE("eval_phi outside the definiteness interval reports the breakdown") {
  GtrsProblem prob = testing::example1();
  SolverConfig cfg;
  CHECK_THROWS_AS(eval_phi(prob, 2.0, cfg), SolveError);
}

TEST_CASE("check_interior accepts the feasible unconstrained minimizer") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(2);
  prob.B = SparseSymmetric::identity(2);
  prob.a = Vector::Zero(2);
  prob.b = Vector::Zero(2);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  SolverConfig cfg;
  auto out = check_interior(prob, cfg);
  REQUIRE(out.has_value());
  CHECK(out->x_star.norm() <= 1e-12);
}

TEST_CASE("check_interior rejects an infeasible unconstrained minimizer") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(2);
  prob.B = SparseSymmetric::identity(2);
  prob.a = (Vector(2) << -2.0, 0.0).finished();
  prob.b = Vector::Zero(2);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  SolverConfig cfg;
  PhiEval at_zero;
  auto out = check_interior(prob, cfg, &at_zero);
  CHECK_FALSE(out.has_value());
  // x_c = [2, 0], g = 4 - 1 = 3 > 0.
  CHECK(at_zero.x[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(at_zero.phi == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("phi_prime matches central finite differences") {
  for (std::uint32_t seed : {7u, 19u, 40u}) {
    const Index n = 10;
    Eigen::MatrixXd bd = testing::random_symmetric(n, seed);
    Eigen::MatrixXd ad = testing::random_spd(n, seed + 2) - 0.5 * bd;
    GtrsProblem prob;
    prob.A = testing::from_dense(ad);
    prob.B = testing::from_dense(bd);
    prob.a = testing::random_vector(n, seed + 3);
    prob.b = testing::random_vector(n, seed + 4);
    prob.beta = 1.0;
    prob.lambda_hat = 0.5;
    SolverConfig cfg;

    const double lambda = 0.5;
    PhiEval ev = eval_phi(prob, lambda, cfg);
    const double derivative = phi_prime(prob, lambda, ev.x, cfg);
    CHECK(derivative <= 0.0);

    const double h = 1e-6;
    const double fd =
        (eval_phi(prob, lambda + h, cfg).phi - eval_phi(prob, lambda - h, cfg).phi) / (2.0 * h);
    CHECK(derivative == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("refine is a fixpoint at the root and contracts nearby") {
  // Affine phi: root is exact after one Newton step.
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(1);
  prob.B = SparseSymmetric::zero(1);
  prob.a = (Vector(1) << -3.0).finished();
  prob.b = (Vector(1) << 1.0).finished();
  prob.beta = -2.0;
  prob.lambda_hat = 0.0;
  SolverConfig cfg;

  PhiEval at_root = eval_phi(prob, 2.0, cfg);
  RefineResult fix = refine(prob, at_root.x, 2.0, cfg, 0.0, 10.0);
  CHECK(fix.lambda == doctest::Approx(2.0));

  PhiEval off = eval_phi(prob, 2.001, cfg);
  RefineResult ref = refine(prob, off.x, 2.001, cfg, 0.0, 10.0);
  CHECK(std::abs(ref.lambda - 2.0) <= 1e-6);
}

TEST_CASE("solve handles a constant phi through the interior branch") {
  // a = A u, b = B u makes x(lambda) = -u for every lambda; with beta = -5
  // the unconstrained minimizer is feasible.
  GtrsProblem prob;
  prob.A = testing::from_dense((Eigen::MatrixXd(2, 2) << 1, 0, 0, 2).finished());
  prob.B = testing::from_dense((Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished());
  prob.a = (Vector(2) << 1.0, 2.0).finished();
  prob.b = (Vector(2) << 1.0, -1.0).finished();
  prob.beta = -5.0;
  prob.lambda_hat = 1.0;
  GtrsOutcome out = solve(prob);
  CHECK(out.case_kind == CaseKind::Interior);
  CHECK(out.lambda_star == 0.0);
  CHECK(out.x_star[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(out.x_star[1] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("solve handles a constant phi through the upper hard case") {
  GtrsProblem prob;
  prob.A = testing::from_dense((Eigen::MatrixXd(2, 2) << 1, 0, 0, 2).finished());
  prob.B = testing::from_dense((Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished());
  prob.a = (Vector(2) << 1.0, 2.0).finished();
  prob.b = (Vector(2) << 1.0, -1.0).finished();
  prob.beta = 5.0;
  prob.lambda_hat = 1.0;
  GtrsOutcome out = solve(prob);
  CHECK(out.case_kind == CaseKind::HardCase2Upper);
  CHECK(out.lambda_star == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(out.x_star[0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(out.x_star[1] == doctest::Approx(-1.0 + std::sqrt(5.0)).epsilon(1e-8));
  CHECK(out.success);
  CHECK(eval_q(prob, out.x_star) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("exact root at lambda_hat is recognized") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(1);
  prob.B = SparseSymmetric::zero(1);
  prob.a = (Vector(1) << -3.0).finished();
  prob.b = (Vector(1) << 1.0).finished();
  prob.beta = -2.0;
  prob.lambda_hat = 2.0;  // phi(2) = 0 exactly
  GtrsOutcome out = solve(prob);
  CHECK(out.case_kind == CaseKind::ExactAtLambdaHat);
  CHECK(out.lambda_star == doctest::Approx(2.0));
  CHECK(out.success);
}

TEST_CASE("random instances agree with the dense oracle") {
  using namespace probgen;
  int checked = 0;
  for (std::uint64_t seed : {11ull, 22ull, 33ull, 44ull}) {
    for (CaseRequest kind : {CaseRequest::Easy, CaseRequest::Hard1, CaseRequest::Hard2}) {
      for (ClassKind klass : {ClassKind::Class1, ClassKind::Class2}) {
        GenSpec spec;
        spec.n = 30;
        spec.density = 0.15;
        spec.cond = 10.0;
        spec.case_kind = kind;
        spec.class_kind = klass;
        spec.seed = seed;
        GenArtifact art = generate(spec);

        GtrsOutcome mine = solve(art.problem);
        oracle::OracleResult ref = oracle::dense_solve(art.problem);

        CHECK(mine.success);
        const double rel = std::abs(oracle::accuracy(mine.best_objective,
                                                     ref.outcome.best_objective));
        CHECK(rel <= 1e-6);
        if (ref.classification_margin > 1e-6) {
          CHECK(mine.case_kind == ref.outcome.case_kind);
        }
        ++checked;
      }
    }
  }
  CHECK(checked == 24);
}

TEST_CASE("interior phi evaluations decrease monotonically along the trace") {
  using namespace probgen;
  GenSpec spec;
  spec.n = 40;
  spec.density = 0.2;
  spec.cond = 10.0;
  spec.case_kind = CaseRequest::Easy;
  spec.class_kind = ClassKind::Class1;
  spec.seed = 5;
  GenArtifact art = generate(spec);
  GtrsOutcome out = solve(art.problem);

  std::vector<SecularTraceEntry> evals = out.trace;
  std::sort(evals.begin(), evals.end(),
            [](const auto& l, const auto& r) { return l.lambda < r.lambda; });
  double scale = 1.0;
  for (const auto& e : evals) scale = std::max(scale, std::abs(e.phi));
  for (std::size_t i = 1; i < evals.size(); ++i) {
    CHECK(evals[i].phi <= evals[i - 1].phi + 1e-6 * scale);
  }
}

TEST_CASE("complementarity and the multiplier interval hold on outcomes") {
  using namespace probgen;
  for (std::uint64_t seed : {3ull, 9ull}) {
    GenSpec spec;
    spec.n = 25;
    spec.density = 0.2;
    spec.cond = 10.0;
    spec.case_kind = CaseRequest::Easy;
    spec.class_kind = ClassKind::Class2;
    spec.seed = seed;
    GenArtifact art = generate(spec);
    GtrsOutcome out = solve(art.problem);
    CHECK(out.lambda_star >= 0.0);
    CHECK(out.kkt.multiplier_in_interval);
    CHECK(out.kkt.complementarity <= 1e-6 * (1.0 + std::abs(out.best_objective)));
  }
}

TEST_SUITE_END();
