#pragma once

#include <Eigen/Dense>

#include <algorithm>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tfcs/error.hpp"
#include "tfcs/fft.hpp"
#include "tfcs/signals.hpp"

namespace tfcs {

enum class WindowKind { rect, hann };

inline std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::rect ? "rect" : "hann";
}

inline WindowKind parse_window_kind(std::string_view name) {
  if (name == "rect") return WindowKind::rect;
  if (name == "hann") return WindowKind::hann;
  throw ParameterError("unknown window kind '" + std::string(name) + "'");
}

struct Window {
  WindowKind kind = WindowKind::hann;
  std::vector<double> coefficients;

  std::size_t length() const { return coefficients.size(); }
};

// Even-length analysis window; coefficient i sits at lag i - M/2.
// Hann is the periodic form, so the window is symmetric about lag 0.
inline Window make_window(WindowKind kind, std::size_t length) {
  detail::require(length >= 2 && length % 2 == 0, "window: length must be even and >= 2");
  Window w{kind, std::vector<double>(length, 1.0)};
  if (kind == WindowKind::hann) {
    for (std::size_t i = 0; i < length; ++i) {
      w.coefficients[i] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(length));
    }
  }
  return w;
}

// Complex STFT, stored frequency-major: values(k, n) for bin k (natural DFT
// order, bin 0 = DC) and time index n.
struct StftMatrix {
  Eigen::MatrixXcd values;
  double fs = 1.0;
  std::size_t window_length = 0;
  std::size_t fft_length = 0;

  std::size_t time_count() const { return static_cast<std::size_t>(values.cols()); }
  std::complex<double> operator()(std::size_t n, std::size_t k) const {
    return values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  }
};

struct SmParams {
  std::size_t half_width = 6;  // L; the frequency window spans 2L+1 bins
};

// Real time-frequency map with centered frequency axis: row k is
// (k - K/2) * fs / K Hz, column n is time index n.
struct TFMap {
  Eigen::MatrixXd values;
  double fs = 1.0;
  std::size_t fft_length = 0;

  std::size_t time_count() const { return static_cast<std::size_t>(values.cols()); }
  std::size_t bin_count() const { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t n, std::size_t k) const {
    return values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  }
  double freq_of_bin(std::size_t k) const { return bin_to_hz(k, fs, fft_length); }

  static double bin_to_hz(std::size_t k, double fs, std::size_t fft_length) {
    return (static_cast<double>(k) - static_cast<double>(fft_length / 2)) * fs /
           static_cast<double>(fft_length);
  }
};

// Sliding-window DFT with hop 1. The window is centered on each analysis
// instant and the signal is zero outside its support.
inline StftMatrix stft(const ComplexSignal& signal, const Window& window, std::size_t fft_length) {
  const std::size_t n_samples = signal.size();
  const std::size_t wlen = window.length();
  detail::require(n_samples > 0, "stft: signal is empty");
  detail::require(wlen >= 2 && wlen % 2 == 0, "stft: window length must be even and >= 2");
  detail::require(fft_length >= wlen, "stft: fft_length must be >= window length");
  detail::require(fft_length % 2 == 0, "stft: fft_length must be even");

  StftMatrix out;
  out.fs = signal.fs;
  out.window_length = wlen;
  out.fft_length = fft_length;
  out.values.resize(static_cast<Eigen::Index>(fft_length), static_cast<Eigen::Index>(n_samples));

  FftPlan plan(fft_length, FftDirection::forward);
  auto buf = plan.data();
  const auto half = static_cast<std::ptrdiff_t>(wlen / 2);
  const auto len = static_cast<std::ptrdiff_t>(n_samples);
  const auto k_len = static_cast<std::ptrdiff_t>(fft_length);

  for (std::ptrdiff_t n = 0; n < len; ++n) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (std::ptrdiff_t m = -half; m < half; ++m) {
      const std::ptrdiff_t idx = n + m;
      if (idx < 0 || idx >= len) continue;
      // lag m lands at DFT slot m mod K so the phase reference is the window center
      const std::ptrdiff_t slot = ((m % k_len) + k_len) % k_len;
      buf[static_cast<std::size_t>(slot)] = signal.samples[static_cast<std::size_t>(idx)] *
                                            window.coefficients[static_cast<std::size_t>(m + half)];
    }
    plan.execute();
    for (std::ptrdiff_t k = 0; k < k_len; ++k) {
      out.values(k, n) = buf[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

namespace detail {

// Reorders rows so that row K/2 holds DC.
inline Eigen::MatrixXcd center_shift(const Eigen::MatrixXcd& natural) {
  const Eigen::Index k_len = natural.rows();
  const Eigen::Index half = k_len / 2;
  Eigen::MatrixXcd shifted(k_len, natural.cols());
  for (Eigen::Index r = 0; r < k_len; ++r) shifted.row(r) = natural.row((r + half) % k_len);
  return shifted;
}

}  // namespace detail

inline TFMap spectrogram(const StftMatrix& s) {
  const Eigen::MatrixXcd shifted = detail::center_shift(s.values);
  TFMap out;
  out.fs = s.fs;
  out.fft_length = s.fft_length;
  out.values = shifted.unaryExpr([](const std::complex<double>& z) { return std::norm(z); });
  return out;
}

// S-method with a rectangular frequency window of 2L+1 bins:
//   SM(n,k) = |S(n,k)|^2 + 2 Re sum_{l=1..L} S(n,k+l) S*(n,k-l)
// evaluated on the center-shifted STFT; terms with k+-l outside 0..K-1 are
// dropped, so nothing wraps across +-fs/2.
inline TFMap s_method(const StftMatrix& s, const SmParams& p) {
  const auto k_len = static_cast<Eigen::Index>(s.fft_length);
  detail::require(s.values.rows() == k_len, "s_method: STFT shape does not match fft_length");
  detail::require(static_cast<Eigen::Index>(p.half_width) < k_len / 2,
                  "s_method: L must satisfy 0 <= L < K/2");

  const Eigen::MatrixXcd shifted = detail::center_shift(s.values);
  const auto span = static_cast<Eigen::Index>(p.half_width);

  TFMap out;
  out.fs = s.fs;
  out.fft_length = s.fft_length;
  out.values.resize(k_len, shifted.cols());
  for (Eigen::Index n = 0; n < shifted.cols(); ++n) {
    for (Eigen::Index k = 0; k < k_len; ++k) {
      const std::complex<double> center = shifted(k, n);
      double cross = 0.0;
      const Eigen::Index reach = std::min({span, k, k_len - 1 - k});
      for (Eigen::Index l = 1; l <= reach; ++l) {
        const std::complex<double> up = shifted(k + l, n);
        const std::complex<double> down = shifted(k - l, n);
        // Re{up * conj(down)}
        cross += up.real() * down.real() + up.imag() * down.imag();
      }
      out.values(k, n) = std::norm(center) + 2.0 * cross;
    }
  }
  return out;
}

}  // namespace tfcs
