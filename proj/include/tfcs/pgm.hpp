#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "tfcs/error.hpp"

// Binary PGM (P5, maxval 255) codec for 8-bit matrices. Row 0 of the matrix
// is the first raster row of the file.
namespace tfcs::pgm {

inline void write(std::ostream& os, const Eigen::MatrixXd& pixels) {
  for (Eigen::Index i = 0; i < pixels.size(); ++i) {
    const double v = pixels.data()[i];
    tfcs::detail::require(std::isfinite(v) && v >= 0.0 && v <= 255.0 && v == std::floor(v),
                    "pgm: pixels must be integers in [0,255]");
  }
  os << "P5\n" << pixels.cols() << ' ' << pixels.rows() << "\n255\n";
  std::string row(static_cast<std::size_t>(pixels.cols()), '\0');
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = static_cast<char>(static_cast<std::uint8_t>(pixels(r, c)));
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!os) throw std::runtime_error("pgm: write failed");
}

namespace detail {

// Skips whitespace and '#' comments, then reads one decimal header field.
inline long read_header_int(std::istream& is) {
  int ch = is.peek();
  while (ch != EOF) {
    if (ch == '#') {
      std::string discard;
      std::getline(is, discard);
    } else if (std::isspace(ch)) {
      is.get();
    } else {
      break;
    }
    ch = is.peek();
  }
  if (ch == EOF || !std::isdigit(ch)) throw FormatError("pgm: malformed header");
  long value = 0;
  while (std::isdigit(is.peek())) {
    value = value * 10 + (is.get() - '0');
    if (value > (1L << 30)) throw FormatError("pgm: header value too large");
  }
  return value;
}

}  // namespace detail

inline Eigen::MatrixXd read(std::istream& is) {
  char magic[2] = {0, 0};
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || magic[1] != '5') throw FormatError("pgm: missing P5 magic");
  const long cols = detail::read_header_int(is);
  const long rows = detail::read_header_int(is);
  const long maxval = detail::read_header_int(is);
  if (!std::isspace(is.get())) throw FormatError("pgm: missing whitespace after maxval");
  if (rows <= 0 || cols <= 0) throw FormatError("pgm: empty image");
  if (maxval != 255) throw UnsupportedError("pgm: only maxval 255 is supported");

  Eigen::MatrixXd pixels(rows, cols);
  std::string row(static_cast<std::size_t>(cols), '\0');
  for (long r = 0; r < rows; ++r) {
    is.read(row.data(), static_cast<std::streamsize>(cols));
    if (is.gcount() != cols) throw FormatError("pgm: truncated pixel data");
    for (long c = 0; c < cols; ++c) {
      pixels(r, c) = static_cast<double>(static_cast<std::uint8_t>(row[static_cast<std::size_t>(c)]));
    }
  }
  return pixels;
}

inline void write_file(const std::filesystem::path& path, const Eigen::MatrixXd& pixels) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("pgm: cannot open '" + path.string() + "' for writing");
  write(os, pixels);
}

inline Eigen::MatrixXd read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("pgm: cannot open '" + path.string() + "'");
  return read(is);
}

// Metadata record stored next to an image: foo.pgm -> foo.json
inline std::filesystem::path sidecar_path(const std::filesystem::path& image_path) {
  auto p = image_path;
  p.replace_extension(".json");
  return p;
}

}  // namespace tfcs::pgm
