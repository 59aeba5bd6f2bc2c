#include <doctest.h>

#include <cmath>

#include "gtrs/problem.hpp"
#include "helpers.hpp"

using namespace gtrs;

TEST_SUITE_BEGIN("gtrs");

TEST_CASE("constraint values of the worked example") {
  GtrsProblem prob = testing::example1();
  Vector x(2);
  x << 0.0, 8.0;
  CHECK(eval_g(prob, x) == doctest::Approx(336.0).epsilon(1e-14));

  x << -25.0, 8.0;
  CHECK(eval_g(prob, x) == doctest::Approx(-914.0).epsilon(1e-14));
}

TEST_CASE("zero point gives g = beta and q = 0") {
  GtrsProblem prob = testing::example1();
  prob.beta = -3.5;
  Vector zero = Vector::Zero(2);
  CHECK(eval_g(prob, zero) == doctest::Approx(-3.5));
  CHECK(eval_q(prob, zero) == doctest::Approx(0.0));
}

TEST_CASE("kkt residuals vanish at the known optimal pair") {
  GtrsProblem prob = testing::example1();
  Vector x_star(2);
  x_star << -25.0 + std::sqrt(457.0), 8.0;
  KktReport kkt = kkt_residual(prob, x_star, 0.5);
  CHECK(kkt.stationarity <= 1e-12);
  CHECK(std::abs(kkt.feasibility) <= 1e-11);
  CHECK(kkt.complementarity <= 1e-11);
  CHECK(kkt.multiplier_in_interval);
}

TEST_CASE("all residuals vanish for the all-zero instance") {
  GtrsProblem prob;
  prob.A = SparseSymmetric::identity(3);
  prob.B = SparseSymmetric::identity(3);
  prob.a = Vector::Zero(3);
  prob.b = Vector::Zero(3);
  prob.beta = -1.0;
  prob.lambda_hat = 0.0;
  KktReport kkt = kkt_residual(prob, Vector::Zero(3), 0.0);
  CHECK(kkt.stationarity == 0.0);
  CHECK(kkt.feasibility == doctest::Approx(-1.0));
  CHECK(kkt.complementarity == 0.0);
}

TEST_CASE("stationarity grows linearly under perturbation") {
  GtrsProblem prob = testing::example1();
  Vector x_star(2);
  x_star << -25.0 + std::sqrt(457.0), 8.0;
  // Perturb along e2; e1 spans the null space of A + 0.5 B and would not
  // move the residual at all.
  Vector e2(2);
  e2 << 0.0, 1.0;

  const double r1 = kkt_residual(prob, x_star + 1e-3 * e2, 0.5).stationarity;
  const double r2 = kkt_residual(prob, x_star + 2e-3 * e2, 0.5).stationarity;
  CHECK(r1 > 1e-5);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("invalid problems are rejected") {
  GtrsProblem prob = testing::example1();
  prob.lambda_hat = -0.1;
  CHECK_THROWS_AS(prob.validate(), std::invalid_argument);

  prob = testing::example1();
  prob.a = Vector::Zero(3);
  CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
}

TEST_SUITE_END();
