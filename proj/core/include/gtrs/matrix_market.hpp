// Matrix Market readers and writers: coordinate/symmetric for matrices,
// array format for vectors. 1-based indices, %.17g values so files
// round-trip bit-exactly.
#pragma once

#include <iosfwd>
#include <string>

#include "gtrs/sparse_matrix.hpp"

namespace gtrs {

SparseSymmetric read_matrix_market(std::istream& in, const std::string& name = "<stream>");
SparseSymmetric read_matrix_market_file(const std::string& path);
void write_matrix_market(std::ostream& out, const SparseSymmetric& m);
void write_matrix_market_file(const std::string& path, const SparseSymmetric& m);

Vector read_vector_market(std::istream& in, const std::string& name = "<stream>");
Vector read_vector_market_file(const std::string& path);
void write_vector_market(std::ostream& out, const Vector& v);
void write_vector_market_file(const std::string& path, const Vector& v);

}  // namespace gtrs
