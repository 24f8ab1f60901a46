#pragma once

#include <iosfwd>
#include <variant>

#include "tailcs/types.hpp"

namespace tailcs {

// Runtime-tagged dense matrix, as stored in the text format:
//   matrix <real|complex> <rows> <cols>
//   one row per line; real entries are decimal literals, complex entries are
//   re,im pairs; single spaces between entries. Values round-trip at 17
//   significant digits.
using TaggedMatrix = std::variant<MatrixX<double>, MatrixX<Complex>>;

bool is_real(const TaggedMatrix& a);
Index matrix_rows(const TaggedMatrix& a);
Index matrix_cols(const TaggedMatrix& a);

void write_matrix(std::ostream& os, const TaggedMatrix& a);
TaggedMatrix read_matrix(std::istream& is);

void write_matrix_file(const std::string& path, const TaggedMatrix& a);
TaggedMatrix read_matrix_file(const std::string& path);

// Vectors are single-column matrices in the same format.
using TaggedVec = std::variant<VecX<double>, VecX<Complex>>;

TaggedVec read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, const TaggedVec& v);

std::string format_scalar(double v);
std::string format_scalar(const Complex& v);

}  // namespace tailcs
