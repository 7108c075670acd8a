#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// None of these call into the code path they are used to check.

#include <Eigen/Dense>
#include <quadmath.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tfcs/signals.hpp"
#include "tfcs/tfa.hpp"

namespace oracle {

using cd = std::complex<double>;

// Direct evaluation of the windowed sum, no FFT.
inline cd stft(const tfcs::ComplexSignal& x, const tfcs::Window& w, std::size_t k_len, long n, long k) {
  const long half = static_cast<long>(w.length() / 2);
  cd acc{};
  for (long m = -half; m < half; ++m) {
    const long idx = n + m;
    if (idx < 0 || idx >= static_cast<long>(x.size())) continue;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(m * k) / static_cast<double>(k_len);
    acc += x.samples[static_cast<std::size_t>(idx)] * w.coefficients[static_cast<std::size_t>(m + half)] *
           std::polar(1.0, angle);
  }
  return acc;
}

// Cross-term sum over l = -L..L with P(l) = 1 on the centered STFT column.
inline double s_method_sum(const Eigen::MatrixXcd& natural, long n, long k_shifted, long half_width) {
  const long k_len = natural.rows();
  auto centered = [&](long r) { return natural((r + k_len / 2) % k_len, n); };
  cd acc{};
  for (long l = -half_width; l <= half_width; ++l) {
    const long up = k_shifted + l, down = k_shifted - l;
    if (up < 0 || up >= k_len || down < 0 || down >= k_len) continue;
    acc += centered(up) * std::conj(centered(down));
  }
  return acc.real();
}

using quad = __float128;

// Smoothed TV in quad precision. Some gradient entries are sums of nearly
// opposite unit terms (e.g. the bottom-right corner), so a double-precision
// difference quotient would be dominated by rounding.
inline quad tv_quad(const std::vector<quad>& s, Eigen::Index rows, Eigen::Index cols, quad eps) {
  quad total = 0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const quad v = s[static_cast<std::size_t>(i + j * rows)];
      const quad dr = i + 1 < rows ? s[static_cast<std::size_t>(i + 1 + j * rows)] - v : 0;
      const quad dc = j + 1 < cols ? s[static_cast<std::size_t>(i + (j + 1) * rows)] - v : 0;
      total += sqrtq(dr * dr + dc * dc + eps * eps);
    }
  }
  return total;
}

// Central differences of the functional, independent of the analytic gradient.
inline Eigen::MatrixXd tv_gradient_fd(const Eigen::MatrixXd& s, double eps, double h) {
  Eigen::MatrixXd g(s.rows(), s.cols());
  std::vector<quad> probe(s.data(), s.data() + s.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const quad keep = probe[i];
    probe[i] = keep + h;
    const quad up = tv_quad(probe, s.rows(), s.cols(), eps);
    probe[i] = keep - h;
    const quad down = tv_quad(probe, s.rows(), s.cols(), eps);
    probe[i] = keep;
    g.data()[i] = static_cast<double>((up - down) / (2 * static_cast<quad>(h)));
  }
  return g;
}

// x[n] = N^{-1/2} sum_k s_k exp(j 2 pi k n / N), evaluated directly.
inline cd synthesize(const std::vector<cd>& spectrum, std::size_t n) {
  const auto len = static_cast<double>(spectrum.size());
  cd acc{};
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    acc += spectrum[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k * n) / len);
  }
  return acc / std::sqrt(len);
}

}  // namespace oracle
