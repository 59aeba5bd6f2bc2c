#include "bundle.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "gtrs/matrix_market.hpp"

namespace gtrs::cli {

namespace {
using json = nlohmann::ordered_json;
}

GtrsProblem ProblemBundle::load() const {
  GtrsProblem prob;
  prob.A = read_matrix_market_file(a_matrix.string());
  prob.B = read_matrix_market_file(b_matrix.string());
  prob.a = read_vector_market_file(a_vector.string());
  prob.b = read_vector_market_file(b_vector.string());
  if (!beta) throw std::runtime_error("bundle: beta missing (manifest entry or --beta)");
  if (!lambda_hat) {
    throw std::runtime_error("bundle: lambda_hat missing (manifest entry or --lambda-hat)");
  }
  prob.beta = *beta;
  prob.lambda_hat = *lambda_hat;
  prob.validate();
  return prob;
}

ProblemBundle read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open manifest");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw std::runtime_error(path.string() + ": manifest parse error: " + err.what());
  }
  const auto dir = path.parent_path();

  ProblemBundle bundle;
  auto resolve = [&](const std::string& key) -> std::filesystem::path {
    if (!doc.contains(key)) {
      throw std::runtime_error(path.string() + ": manifest lacks the '" + key + "' entry");
    }
    std::filesystem::path p = doc.at(key).get<std::string>();
    return p.is_absolute() ? p : dir / p;
  };
  bundle.a_matrix = resolve("A");
  bundle.b_matrix = resolve("B");
  bundle.a_vector = resolve("a");
  bundle.b_vector = resolve("b");
  if (doc.contains("beta")) bundle.beta = doc.at("beta").get<double>();
  if (doc.contains("lambda_hat")) bundle.lambda_hat = doc.at("lambda_hat").get<double>();
  if (doc.contains("seed")) bundle.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("expected_case")) bundle.expected_case = doc.at("expected_case").get<std::string>();
  if (doc.contains("class")) bundle.klass = doc.at("class").get<std::string>();
  return bundle;
}

void write_manifest(const std::filesystem::path& path, const ProblemBundle& bundle) {
  json doc;
  doc["A"] = bundle.a_matrix.filename().string();
  doc["B"] = bundle.b_matrix.filename().string();
  doc["a"] = bundle.a_vector.filename().string();
  doc["b"] = bundle.b_vector.filename().string();
  if (bundle.beta) doc["beta"] = *bundle.beta;
  if (bundle.lambda_hat) doc["lambda_hat"] = *bundle.lambda_hat;
  if (bundle.seed) doc["seed"] = *bundle.seed;
  if (bundle.expected_case) doc["expected_case"] = *bundle.expected_case;
  if (bundle.klass) doc["class"] = *bundle.klass;

  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open manifest for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace gtrs::cli
