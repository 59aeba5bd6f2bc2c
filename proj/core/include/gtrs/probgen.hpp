// Random test-problem generation for the two benchmark families: class 1
// has A positive definite with a target condition number and lambda_hat = 0;
// class 2 sets A = C - B for positive definite C and lambda_hat = 1. Easy,
// hard-case-1 and hard-case-2 instances are planted through the right-hand
// side and the constraint offset. Everything is bit-reproducible from the
// seed.
#pragma once

#include <cstdint>
#include <optional>

#include "gtrs/config.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {
namespace probgen {

enum class CaseRequest { Easy, Hard1, Hard2 };
enum class ClassKind { Class1, Class2 };

std::string to_string(CaseRequest value);
std::string to_string(ClassKind value);
std::optional<CaseRequest> case_from_string(const std::string& text);
std::optional<ClassKind> class_from_string(const std::string& text);

struct GenSpec {
  Index n = 0;
  double density = 1e-2;
  double cond = 10.0;
  CaseRequest case_kind = CaseRequest::Easy;
  ClassKind class_kind = ClassKind::Class1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GenOptions {
  SolverConfig solver;  ///< eigensolver / CG settings used during generation
  int retry_budget = 50;
};

struct GenArtifact {
  GtrsProblem problem;
  double planted_lambda = 0.0;  ///< the lambda in a = -(A + lambda B) x0
  Vector x0;
  CaseRequest expected_case = CaseRequest::Easy;
  int retries = 0;
  bool density_raised = false;  ///< requested density was below one entry per row
  double lambda_low = 0.0;      ///< interval endpoints computed during generation
  double lambda_up = 0.0;
};

/// Sparse symmetric matrix with the requested density; with `cond` present
/// the result is positive definite with that spectral condition number
/// (log-uniform spectrum rotated by random sparse plane rotations), without
/// it an indefinite matrix with uniform [-1, 1] entries on a random pattern.
SparseSymmetric rand_sparse_sym(Index n, double density, std::optional<double> cond,
                                std::uint64_t seed, bool* density_raised = nullptr);

GenArtifact generate(const GenSpec& spec, const GenOptions& opts = {});

}  // namespace probgen
}  // namespace gtrs
