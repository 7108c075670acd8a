#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tfcs/error.hpp"

namespace tfcs {

inline constexpr std::string_view kTracksHeader =
    "n,t_seconds,f_analytic_hz,f_original_hz,f_reconstructed_hz,error_hz,valid";

struct TrackRow {
  std::size_t n = 0;
  double t_seconds = 0.0;
  double f_analytic_hz = 0.0;
  double f_original_hz = 0.0;
  double f_reconstructed_hz = 0.0;
  double error_hz = 0.0;
  bool valid = false;
};

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw FormatError("tracks csv: bad number '" + std::string(field) + "' on line " + std::to_string(line));
  }
  return v;
}

}  // namespace detail

inline void write_tracks_csv(const std::vector<TrackRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("tracks csv: cannot open '" + path.string() + "'");
  os << kTracksHeader << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << detail::format_double(r.t_seconds) << ',' << detail::format_double(r.f_analytic_hz) << ','
       << detail::format_double(r.f_original_hz) << ',' << detail::format_double(r.f_reconstructed_hz) << ','
       << detail::format_double(r.error_hz) << ',' << (r.valid ? 1 : 0) << '\n';
  }
  if (!os) throw std::runtime_error("tracks csv: write failed");
}

inline std::vector<TrackRow> read_tracks_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("tracks csv: cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line) || line != kTracksHeader) throw FormatError("tracks csv: unexpected header");

  std::vector<TrackRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 7) throw FormatError("tracks csv: expected 7 fields on line " + std::to_string(line_no));
    TrackRow r;
    r.n = static_cast<std::size_t>(detail::parse_double(fields[0], line_no));
    r.t_seconds = detail::parse_double(fields[1], line_no);
    r.f_analytic_hz = detail::parse_double(fields[2], line_no);
    r.f_original_hz = detail::parse_double(fields[3], line_no);
    r.f_reconstructed_hz = detail::parse_double(fields[4], line_no);
    r.error_hz = detail::parse_double(fields[5], line_no);
    if (fields[6] != "0" && fields[6] != "1") {
      throw FormatError("tracks csv: valid must be 0 or 1 on line " + std::to_string(line_no));
    }
    r.valid = fields[6] == "1";
    rows.push_back(r);
  }
  return rows;
}

}  // namespace tfcs
