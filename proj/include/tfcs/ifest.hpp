#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <vector>

#include "tfcs/error.hpp"
#include "tfcs/imagequant.hpp"
#include "tfcs/signals.hpp"
#include "tfcs/tfa.hpp"

namespace tfcs {

// Per-column frequency estimate on the centered bin grid.
struct IFTrack {
  std::vector<std::size_t> bin;
  std::vector<double> freq;  // (bin - K/2) * fs / K
  std::vector<bool> valid;   // false for edge-guard columns
  double fs = 0.0;
  std::size_t fft_length = 0;

  std::size_t size() const { return bin.size(); }
};

// Peak estimator: bin(n) = argmax_k values(k, n), ties to the lowest k.
// The first and last `edge_guard` columns are flagged invalid.
inline IFTrack estimate_if(const Eigen::MatrixXd& values, double fs, std::size_t fft_length,
                           std::size_t edge_guard) {
  detail::require(values.rows() > 0 && values.cols() > 0, "estimate_if: empty map");
  detail::require(values.allFinite(), "estimate_if: non-finite values");
  detail::require(static_cast<std::size_t>(values.rows()) == fft_length,
                  "estimate_if: row count does not match fft_length");
  detail::require(std::isfinite(fs) && fs > 0.0, "estimate_if: fs must be > 0");

  const auto n_cols = static_cast<std::size_t>(values.cols());
  IFTrack track;
  track.fs = fs;
  track.fft_length = fft_length;
  track.bin.resize(n_cols);
  track.freq.resize(n_cols);
  track.valid.resize(n_cols);
  for (std::size_t n = 0; n < n_cols; ++n) {
    const auto col = values.col(static_cast<Eigen::Index>(n));
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < col.size(); ++k) {
      if (col(k) > col(best)) best = k;
    }
    track.bin[n] = static_cast<std::size_t>(best);
    track.freq[n] = TFMap::bin_to_hz(track.bin[n], fs, fft_length);
    track.valid[n] = n >= edge_guard && n + edge_guard < n_cols;
  }
  return track;
}

inline IFTrack estimate_if(const TFMap& map, std::size_t edge_guard) {
  return estimate_if(map.values, map.fs, map.fft_length, edge_guard);
}

inline IFTrack estimate_if(const GrayImage& img, std::size_t edge_guard) {
  return estimate_if(img.pixels, img.fs, img.fft_length, edge_guard);
}

// Analytic IF snapped to the nearest bin (clamped to the grid) so it can be
// compared with estimated tracks.
inline IFTrack analytic_track(const SignalSpec& spec, std::size_t fft_length, std::size_t edge_guard) {
  spec.validate();
  detail::require(fft_length >= 2 && fft_length % 2 == 0, "analytic_track: fft_length must be even");
  IFTrack track;
  track.fs = spec.fs;
  track.fft_length = fft_length;
  const double bins_per_hz = static_cast<double>(fft_length) / spec.fs;
  const auto half = static_cast<double>(fft_length / 2);
  for (std::size_t n = 0; n < spec.n_samples; ++n) {
    const double pos = half + analytic_if(spec.kind, spec.time_at(n)) * bins_per_hz;
    const double clamped = std::clamp(std::round(pos), 0.0, static_cast<double>(fft_length - 1));
    track.bin.push_back(static_cast<std::size_t>(clamped));
    track.freq.push_back(TFMap::bin_to_hz(track.bin.back(), spec.fs, fft_length));
    track.valid.push_back(n >= edge_guard && n + edge_guard < spec.n_samples);
  }
  return track;
}

struct ErrorReport {
  std::vector<double> error_hz;         // f_a(n) - f_b(n), every column
  std::vector<long> error_bins;         // bin_a(n) - bin_b(n), every column
  std::vector<bool> joint_valid;        // columns the metrics run over
  std::size_t valid_count = 0;
  double mse = 0.0;                     // Hz^2
  double max_abs = 0.0;                 // Hz
  double mean_abs = 0.0;                // Hz
  double mean_abs_bins = 0.0;
  double bin_width = 0.0;               // fs / K

  // Fraction of jointly valid columns whose bins differ by at most tol_bins.
  double frac_within(double tol_bins) const {
    std::size_t hits = 0;
    for (std::size_t n = 0; n < error_bins.size(); ++n) {
      if (joint_valid[n] && static_cast<double>(std::labs(error_bins[n])) <= tol_bins) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(valid_count);
  }
};

inline ErrorReport if_error(const IFTrack& a, const IFTrack& b) {
  detail::require(a.fs == b.fs && a.fft_length == b.fft_length, "if_error: frequency mappings differ");
  detail::require(a.size() == b.size(), "if_error: track lengths differ");

  ErrorReport r;
  r.bin_width = a.fs / static_cast<double>(a.fft_length);
  const std::size_t len = a.size();
  r.error_hz.resize(len);
  r.error_bins.resize(len);
  r.joint_valid.resize(len);
  double sq = 0.0;
  double abs_sum = 0.0;
  long abs_bins = 0;
  for (std::size_t n = 0; n < len; ++n) {
    r.error_hz[n] = a.freq[n] - b.freq[n];
    r.error_bins[n] = static_cast<long>(a.bin[n]) - static_cast<long>(b.bin[n]);
    r.joint_valid[n] = a.valid[n] && b.valid[n];
    if (!r.joint_valid[n]) continue;
    ++r.valid_count;
    const double e = r.error_hz[n];
    sq += e * e;
    abs_sum += std::abs(e);
    abs_bins += std::labs(r.error_bins[n]);
    r.max_abs = std::max(r.max_abs, std::abs(e));
  }
  detail::require(r.valid_count > 0, "if_error: no jointly valid columns");
  const auto count = static_cast<double>(r.valid_count);
  r.mse = sq / count;
  r.mean_abs = abs_sum / count;
  r.mean_abs_bins = static_cast<double>(abs_bins) / count;
  return r;
}

}  // namespace tfcs
