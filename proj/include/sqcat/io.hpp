#pragma once
// Matrix/vector dump formats used for debugging and golden tests.
//
// Binary layout (little-endian host order):
//   bytes 0..3   magic "SQCM"
//   int64        rows
//   int64        cols
//   rows*cols    complex entries as (re, im) double pairs, column-major.
//
// JSON layout: {"rows": R, "cols": C, "data": [[re, im], ...]} column-major.

#include <string>

#include "sqcat/fock.hpp"

namespace sqcat {

void save_matrix_binary(const Eigen::MatrixXcd& m, const std::string& path);
Eigen::MatrixXcd load_matrix_binary(const std::string& path);

std::string matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const std::string& text);

}  // namespace sqcat
