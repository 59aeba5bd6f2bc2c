#include <doctest.h>

#include "gtrs/sparse_matrix.hpp"
#include "helpers.hpp"

using namespace gtrs;

TEST_SUITE_BEGIN("sparse-core");

TEST_CASE("matvec matches the worked 2x2 data") {
  SparseSymmetric a = testing::from_dense((Eigen::MatrixXd(2, 2) << -1, 0, 0, 1).finished());
  Vector x(2);
  x << 1.0, 1.0;
  Vector y = a * x;
  CHECK(y[0] == doctest::Approx(-1.0));
  CHECK(y[1] == doctest::Approx(1.0));
}

TEST_CASE("zero matrix maps everything to zero") {
  SparseSymmetric z = SparseSymmetric::zero(4);
  Vector x = testing::random_vector(4, 11);
  CHECK((z * x).norm() == 0.0);
}

TEST_CASE("matvec agrees with the dense symmetric expansion") {
  for (std::uint32_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Eigen::MatrixXd dense = testing::random_symmetric(5, seed, 0.6);
    SparseSymmetric sparse = testing::from_dense(dense);
    Vector x = testing::random_vector(5, seed + 100);
    CHECK(((sparse * x) - dense * x).norm() <= 1e-14 * (1.0 + x.norm()));
  }
}

TEST_CASE("construction folds duplicates and drops zeros") {
  SparseSymmetric m(3, {{0, 1, 2.0}, {1, 0, 3.0}, {2, 2, 1.0}, {2, 2, -1.0}, {0, 0, 0.0}});
  // (0,1) and (1,0) fold to a single 5.0; (2,2) sums to zero and is dropped.
  CHECK(m.stored_nonzeros() == 1);
  CHECK(m.entries()[0].row == 0);
  CHECK(m.entries()[0].col == 1);
  CHECK(m.entries()[0].value == 5.0);
}

TEST_CASE("out-of-range entries and dimension mismatches are rejected") {
  CHECK_THROWS_AS(SparseSymmetric(2, {{0, 2, 1.0}}), std::invalid_argument);
  SparseSymmetric m = SparseSymmetric::identity(3);
  Vector wrong(2);
  wrong.setZero();
  CHECK_THROWS_AS(m * wrong, std::invalid_argument);
}

TEST_CASE("matvec is symmetric and bitwise deterministic") {
  Eigen::MatrixXd dense = testing::random_symmetric(8, 42, 0.4);
  SparseSymmetric m = testing::from_dense(dense);
  Vector x = testing::random_vector(8, 1);
  Vector y = testing::random_vector(8, 2);
  CHECK(y.dot(m * x) == doctest::Approx(x.dot(m * y)).epsilon(1e-12));

  Vector first = m * x;
  Vector second = m * x;
  CHECK((first - second).norm() == 0.0);
}

TEST_CASE("axpy combines matrices entrywise") {
  Eigen::MatrixXd da = testing::random_symmetric(6, 7, 0.5);
  Eigen::MatrixXd db = testing::random_symmetric(6, 8, 0.5);
  SparseSymmetric c = testing::from_dense(da).axpy(-2.0, testing::from_dense(db));
  CHECK((c.to_dense() - (da - 2.0 * db)).norm() <= 1e-14);
}

TEST_SUITE_END();
