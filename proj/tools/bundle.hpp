// Problem bundles on disk: Matrix Market files for A, B, a, b plus a JSON
// manifest carrying beta, lambda_hat and generation metadata.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gtrs/problem.hpp"

namespace gtrs::cli {

struct ProblemBundle {
  std::filesystem::path a_matrix;
  std::filesystem::path b_matrix;
  std::filesystem::path a_vector;
  std::filesystem::path b_vector;
  std::optional<double> beta;
  std::optional<double> lambda_hat;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> expected_case;
  std::optional<std::string> klass;

  /// Loads and validates the referenced files.
  GtrsProblem load() const;
};

/// Reads a manifest file; paths inside are resolved against its directory.
ProblemBundle read_manifest(const std::filesystem::path& path);

/// Writes the manifest next to the matrix files.
void write_manifest(const std::filesystem::path& path, const ProblemBundle& bundle);

}  // namespace gtrs::cli
