#pragma once

#include <iosfwd>
#include <string>

#include "nambu/operator.hpp"

namespace nambu {

/// Binary dump: little-endian uint64 N, then N*N complex64 entries (float32
/// real, float32 imaginary) in row-major order. Only square matrices.
void write_matrix_binary(std::ostream& os, const Matrix& a);
Matrix read_matrix_binary(std::istream& is);

/// Text dump: header "row,col,re,im" then one line per entry, row-major.
void write_matrix_csv(std::ostream& os, const Matrix& a);

void save_matrix(const std::string& path, const Matrix& a, bool csv);

}  // namespace nambu
