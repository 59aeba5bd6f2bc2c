// Shared fixtures and independent dense oracles for the unit tests.
#pragma once

#include <Eigen/Dense>
#include <random>

#include "gtrs/problem.hpp"
#include "gtrs/sparse_matrix.hpp"

namespace gtrs::testing {

inline SparseSymmetric from_dense(const Eigen::MatrixXd& m) {
  std::vector<Triplet> ts;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) ts.push_back({i, j, m(i, j)});
    }
  }
  return SparseSymmetric(m.rows(), std::move(ts));
}

inline Eigen::MatrixXd random_symmetric(Index n, std::uint32_t seed, double density = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      if (keep(gen) <= density) {
        m(i, j) = value(gen);
        m(j, i) = m(i, j);
      }
    }
  }
  return m;
}

inline Eigen::MatrixXd random_spd(Index n, std::uint32_t seed, double shift = 0.5) {
  Eigen::MatrixXd m = random_symmetric(n, seed);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double lift = shift - es.eigenvalues().minCoeff();
  return m + lift * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::VectorXd random_vector(Index n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> value(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = value(gen);
  return v;
}

// The worked 2x2 instance used throughout: hard case 2 at the lower endpoint.
inline GtrsProblem example1() {
  GtrsProblem prob;
  prob.A = from_dense((Eigen::MatrixXd(2, 2) << -1, 0, 0, 1).finished());
  prob.B = from_dense((Eigen::MatrixXd(2, 2) << 2, 0, 0, -1).finished());
  prob.a = (Eigen::VectorXd(2) << -25.0, -16.5).finished();
  prob.b = (Eigen::VectorXd(2) << 50.0, 25.0).finished();
  prob.beta = 0.0;
  prob.lambda_hat = 0.75;
  return prob;
}

}  // namespace gtrs::testing
