#pragma once

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tfcs/error.hpp"
#include "tfcs/tracks_csv.hpp"

namespace tfcs {

struct PlotFiles {
  std::filesystem::path if_overlay;
  std::filesystem::path error;
};

namespace detail {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  cv::Scalar color;  // BGR
  std::string label;
};

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Line chart with a frame, 5 ticks per axis, axis titles and a legend.
inline cv::Mat line_chart(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  constexpr int kWidth = 900, kHeight = 450;
  constexpr int kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
  cv::Mat canvas(kHeight, kWidth, CV_8UC3, cv::Scalar(255, 255, 255));

  double x_lo = series.front().x.front(), x_hi = x_lo;
  double y_lo = series.front().y.front(), y_hi = y_lo;
  for (const auto& s : series) {
    for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
    for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  }
  if (x_hi == x_lo) x_lo -= 1.0, x_hi += 1.0;
  if (y_hi == y_lo) y_lo -= 1.0, y_hi += 1.0;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const int plot_w = kWidth - kLeft - kRight;
  const int plot_h = kHeight - kTop - kBottom;
  auto to_px = [&](double x, double y) {
    return cv::Point(kLeft + static_cast<int>(std::lround((x - x_lo) / (x_hi - x_lo) * plot_w)),
                     kTop + plot_h - static_cast<int>(std::lround((y - y_lo) / (y_hi - y_lo) * plot_h)));
  };

  const cv::Scalar black(0, 0, 0), grid(220, 220, 220);
  const auto font = cv::FONT_HERSHEY_SIMPLEX;
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    const cv::Point px = to_px(xv, y_lo), py = to_px(x_lo, yv);
    cv::line(canvas, px, {px.x, kTop}, grid, 1);
    cv::line(canvas, py, {kLeft + plot_w, py.y}, grid, 1);
    cv::putText(canvas, tick_label(xv), {px.x - 15, kTop + plot_h + 20}, font, 0.4, black, 1, cv::LINE_AA);
    cv::putText(canvas, tick_label(yv), {8, py.y + 4}, font, 0.4, black, 1, cv::LINE_AA);
  }
  cv::rectangle(canvas, {kLeft, kTop}, {kLeft + plot_w, kTop + plot_h}, black, 1);
  cv::putText(canvas, title, {kLeft, 25}, font, 0.6, black, 1, cv::LINE_AA);
  cv::putText(canvas, x_label, {kLeft + plot_w / 2 - 30, kHeight - 15}, font, 0.5, black, 1, cv::LINE_AA);
  cv::putText(canvas, y_label, {8, kTop - 10}, font, 0.5, black, 1, cv::LINE_AA);

  int legend_y = kTop + 18;
  for (const auto& s : series) {
    std::vector<cv::Point> pts;
    pts.reserve(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) pts.push_back(to_px(s.x[i], s.y[i]));
    cv::polylines(canvas, pts, false, s.color, 2, cv::LINE_AA);
    cv::line(canvas, {kLeft + plot_w - 170, legend_y - 4}, {kLeft + plot_w - 140, legend_y - 4}, s.color, 2);
    cv::putText(canvas, s.label, {kLeft + plot_w - 132, legend_y}, font, 0.45, black, 1, cv::LINE_AA);
    legend_y += 18;
  }
  return canvas;
}

}  // namespace detail

// IF overlay (original red, reconstructed blue) and error signal (green) over
// the valid rows of a tracks CSV.
inline PlotFiles render_plots(const std::filesystem::path& csv_path, const std::filesystem::path& out_dir) {
  const auto rows = read_tracks_csv(csv_path);
  detail::Series original{{}, {}, cv::Scalar(0, 0, 220), "original IF"};
  detail::Series reconstructed{{}, {}, cv::Scalar(220, 0, 0), "reconstructed IF"};
  detail::Series error{{}, {}, cv::Scalar(0, 160, 0), "error"};
  for (const auto& r : rows) {
    if (!r.valid) continue;
    original.x.push_back(r.t_seconds);
    original.y.push_back(r.f_original_hz);
    reconstructed.x.push_back(r.t_seconds);
    reconstructed.y.push_back(r.f_reconstructed_hz);
    error.x.push_back(r.t_seconds);
    error.y.push_back(r.error_hz);
  }
  if (original.x.empty()) throw FormatError("plot: tracks csv has no valid rows");

  std::filesystem::create_directories(out_dir);
  PlotFiles files{out_dir / "if_overlay.png", out_dir / "if_error.png"};
  const auto overlay = detail::line_chart({original, reconstructed}, "Instantaneous frequency", "t [s]", "f [Hz]");
  const auto err = detail::line_chart({error}, "IF error (original - reconstructed)", "t [s]", "error [Hz]");
  if (!cv::imwrite(files.if_overlay.string(), overlay) || !cv::imwrite(files.error.string(), err)) {
    throw std::runtime_error("plot: cannot write PNG files to '" + out_dir.string() + "'");
  }
  return files;
}

}  // namespace tfcs
