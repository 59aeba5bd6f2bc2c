#include <doctest.h>

#include <cmath>

#include "gtrs/oracle.hpp"
#include "gtrs/probgen.hpp"
#include "helpers.hpp"

using namespace gtrs;
using oracle::dense_solve;
using oracle::simdiag;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("simdiag of the worked example recovers the endpoint ratios") {
  GtrsProblem prob = testing::example1();
  oracle::SimDiag sd = simdiag(prob.A.to_dense(), prob.B.to_dense(), prob.lambda_hat);

  // lambda_low = max{-d_i/e_i : e_i > 0} should be 0.5.
  double lo = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < sd.d.size(); ++i) {
    if (sd.e[i] > 0.0) lo = std::max(lo, -sd.d[i] / sd.e[i]);
  }
  CHECK(lo == doctest::Approx(0.5).epsilon(1e-12));

  // Normalization d + lambda_hat e = 1.
  for (Index i = 0; i < sd.d.size(); ++i) {
    CHECK(sd.d[i] + prob.lambda_hat * sd.e[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("simdiag of identical matrices gives unit entries") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  oracle::SimDiag sd = simdiag(id, id, 0.0);
  for (Index i = 0; i < 3; ++i) {
    CHECK(sd.d[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sd.e[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("simdiag reconstructs both matrices") {
  for (std::uint32_t seed : {13u, 29u}) {
    const Index n = 8;
    Eigen::MatrixXd bd = testing::random_symmetric(n, seed);
    Eigen::MatrixXd ad = testing::random_spd(n, seed + 1) - 0.25 * bd;
    oracle::SimDiag sd = simdiag(ad, bd, 0.25);

    CHECK((sd.q.transpose() * ad * sd.q - Eigen::MatrixXd(sd.d.asDiagonal())).norm() <=
          1e-10 * (1.0 + ad.norm()));
    CHECK((sd.q.transpose() * bd * sd.q - Eigen::MatrixXd(sd.e.asDiagonal())).norm() <=
          1e-10 * (1.0 + bd.norm()));

    // Round trip: Q^{-T} diag(d) Q^{-1} rebuilds A.
    Eigen::MatrixXd q_inv = sd.q.inverse();
    CHECK((q_inv.transpose() * Eigen::MatrixXd(sd.d.asDiagonal()) * q_inv - ad).norm() <=
          1e-9 * (1.0 + ad.norm()));
  }
}

TEST_CASE("simdiag requires a positive definite anchor") {
  Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(simdiag(a, b, 0.0), std::invalid_argument);
}

TEST_CASE("dense solve reproduces the worked example") {
  GtrsProblem prob = testing::example1();
  oracle::OracleResult res = dense_solve(prob);
  CHECK(res.outcome.case_kind == CaseKind::HardCase2Lower);
  CHECK(res.outcome.lambda_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.outcome.x_star[0] == doctest::Approx(-25.0 + std::sqrt(457.0)).epsilon(1e-10));
  CHECK(res.outcome.x_star[1] == doctest::Approx(8.0).epsilon(1e-10));
  REQUIRE(res.p_star.has_value());
  CHECK(*res.p_star == doctest::Approx(-914.0).epsilon(1e-10));
  CHECK(res.outcome.kkt.stationarity <= 1e-10);
}

TEST_CASE("dense solve recognizes the interior case") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(3);
  prob.B = SparseSymmetric::identity(3);
  prob.a = Vector::Zero(3);
  prob.b = Vector::Zero(3);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  oracle::OracleResult res = dense_solve(prob);
  CHECK(res.outcome.case_kind == CaseKind::Interior);
  CHECK(res.outcome.x_star.norm() <= 1e-12);
}

TEST_CASE("dense solve satisfies the optimality conditions on generated instances") {
  using namespace probgen;
  for (std::uint64_t seed : {2ull, 8ull, 21ull}) {
    GenSpec spec;
    spec.n = 20;
    spec.density = 0.25;
    spec.cond = 10.0;
    spec.case_kind = seed % 2 ? CaseRequest::Easy : CaseRequest::Hard1;
    spec.class_kind = ClassKind::Class1;
    spec.seed = seed;
    GenArtifact art = generate(spec);
    oracle::OracleResult res = dense_solve(art.problem);
    CHECK(res.outcome.kkt.stationarity <= 1e-9);
    CHECK(res.outcome.kkt.feasibility <= 1e-9);
    CHECK(res.outcome.lambda_star >= -1e-12);
    CHECK(res.outcome.kkt.complementarity <=
          1e-8 * (1.0 + std::abs(res.outcome.best_objective)));
  }
}

TEST_CASE("generated hard-case-2 instances put the oracle multiplier at the endpoint") {
  using namespace probgen;
  for (std::uint64_t seed : {5ull, 10ull, 15ull}) {
    GenSpec spec;
    spec.n = 24;
    spec.density = 0.25;
    spec.cond = 10.0;
    spec.case_kind = CaseRequest::Hard2;
    spec.class_kind = ClassKind::Class1;
    spec.seed = seed;
    GenArtifact art = generate(spec);
    oracle::OracleResult res = dense_solve(art.problem);
    CHECK(res.outcome.case_kind == CaseKind::HardCase2Upper);
    CHECK(res.outcome.lambda_star ==
          doctest::Approx(res.outcome.interval.upper).epsilon(1e-10));
  }
}

TEST_CASE("accuracy metric arithmetic") {
  CHECK(oracle::accuracy(-100.0, -100.0) == 0.0);
  CHECK(oracle::accuracy(-99.9999999, -100.0) == doctest::Approx(1e-9));
  bool absolute = false;
  CHECK(oracle::accuracy(2.0, 0.0, &absolute) == doctest::Approx(2.0));
  CHECK(absolute);
}

TEST_CASE("the oracle refuses above the dense threshold") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(600);
  prob.B = SparseSymmetric::identity(600);
  prob.a = Vector::Zero(600);
  prob.b = Vector::Zero(600);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  CHECK_THROWS_AS(dense_solve(prob), std::invalid_argument);
}

TEST_SUITE_END();
