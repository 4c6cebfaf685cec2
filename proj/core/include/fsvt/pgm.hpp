#pragma once

#include "fsvt/matrix.hpp"

#include <iosfwd>
#include <string>

namespace fsvt {

// 8-bit grayscale PGM (P2 ascii / P5 binary). Pixels map to [0, 1] reals by
// dividing by the file's maxval; saving clamps to [0, 1], rescales and
// rounds half-up.

Matrix read_pgm(std::istream& in);
Matrix load_pgm(const std::string& path);

/// Writes binary (P5) output.
void write_pgm(const Matrix& m, std::ostream& out, int maxval = 255);
void save_pgm(const Matrix& m, const std::string& path, int maxval = 255);

} // namespace fsvt
