#include "fsvt/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsvt {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  // The delimiter byte is consumed along with the token, which is exactly
  // what the P5 raster start requires (single whitespace after maxval).
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (token.empty()) throw std::runtime_error("pgm: unexpected end of header");
  return token;
}

long header_int(std::istream& in, const char* what) {
  const std::string token = header_token(in);
  try {
    std::size_t pos = 0;
    const long v = std::stol(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("pgm: bad ") + what + " '" + token + "'");
  }
}

} // namespace

Matrix read_pgm(std::istream& in) {
  const std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5")
    throw std::runtime_error("pgm: not a P2/P5 file (magic '" + magic + "')");

  const long width = header_int(in, "width");
  const long height = header_int(in, "height");
  const long maxval = header_int(in, "maxval");
  if (width <= 0 || height <= 0)
    throw std::runtime_error("pgm: nonpositive dimensions");
  if (maxval <= 0 || maxval > 255)
    throw std::runtime_error("pgm: only 8-bit files supported (maxval " +
                             std::to_string(maxval) + ")");

  Matrix m(height, width);
  if (magic == "P2") {
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) {
        long v = 0;
        if (!(in >> v)) throw std::runtime_error("pgm: truncated pixel data");
        if (v < 0 || v > maxval)
          throw std::runtime_error("pgm: pixel value out of range");
        m(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
      }
  } else {
    // header_int stopped at the single whitespace byte preceding the raster.
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) {
        const int v = in.get();
        if (v == EOF) throw std::runtime_error("pgm: truncated pixel data");
        if (v > maxval) throw std::runtime_error("pgm: pixel value out of range");
        m(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
      }
  }
  return m;
}

Matrix load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open '" + path + "'");
  return read_pgm(in);
}

void write_pgm(const Matrix& m, std::ostream& out, int maxval) {
  if (maxval <= 0 || maxval > 255)
    throw std::invalid_argument("pgm: maxval must be in [1, 255]");
  out << "P5\n" << m.cols() << ' ' << m.rows() << '\n' << maxval << '\n';
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const double clamped = std::min(1.0, std::max(0.0, m(r, c)));
      const double scaled = std::floor(clamped * maxval + 0.5); // half-up
      out.put(static_cast<char>(static_cast<unsigned char>(scaled)));
    }
}

void save_pgm(const Matrix& m, const std::string& path, int maxval) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot open '" + path + "' for writing");
  write_pgm(m, out, maxval);
  if (!out) throw std::runtime_error("pgm: write failed for '" + path + "'");
}

} // namespace fsvt
