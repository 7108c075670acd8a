#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "tfcs/error.hpp"
#include "tfcs/fft.hpp"

namespace tfcs {

// Time-domain samples y = x[sample_indices] of a length-N signal x that is
// sparse in the DFT domain: x = Psi s with Psi the unitary inverse DFT,
// x[n] = N^{-1/2} sum_k s_k exp(j 2 pi k n / N).
struct MeasurementSet {
  std::vector<std::size_t> sample_indices;
  std::vector<std::complex<double>> values;
  std::size_t signal_length = 0;

  void validate() const {
    detail::require(!sample_indices.empty(), "l1: no measurements");
    detail::require(sample_indices.size() == values.size(), "l1: index/value count mismatch");
    detail::require(sample_indices.size() <= signal_length, "l1: more measurements than samples");
    for (std::size_t i = 0; i < sample_indices.size(); ++i) {
      detail::require(sample_indices[i] < signal_length, "l1: sample index out of range");
      detail::require(i == 0 || sample_indices[i] > sample_indices[i - 1],
                      "l1: sample indices must be strictly increasing");
    }
  }
};

struct L1Result {
  std::vector<std::complex<double>> spectrum;
  std::vector<std::size_t> support;  // bins kept for debiasing
  std::size_t iterations = 0;
};

namespace detail {

// Theta = Phi Psi and its adjoint, applied through FFTs.
class PartialFourierOperator {
 public:
  explicit PartialFourierOperator(const MeasurementSet& meas)
      : meas_(meas),
        scale_(1.0 / std::sqrt(static_cast<double>(meas.signal_length))),
        synth_(meas.signal_length, FftDirection::backward),
        analysis_(meas.signal_length, FftDirection::forward) {}

  std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& s) {
    auto buf = synth_.data();
    std::copy(s.begin(), s.end(), buf.begin());
    synth_.execute();
    std::vector<std::complex<double>> y(meas_.sample_indices.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = scale_ * buf[meas_.sample_indices[i]];
    return y;
  }

  std::vector<std::complex<double>> adjoint(const std::vector<std::complex<double>>& r) {
    auto buf = analysis_.data();
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (std::size_t i = 0; i < r.size(); ++i) buf[meas_.sample_indices[i]] = r[i];
    analysis_.execute();
    std::vector<std::complex<double>> s(buf.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = scale_ * buf[k];
    return s;
  }

 private:
  const MeasurementSet& meas_;
  double scale_;
  FftPlan synth_;
  FftPlan analysis_;
};

inline std::complex<double> soft_threshold(std::complex<double> z, double tau) {
  const double mag = std::abs(z);
  if (mag <= tau) return {};
  return z * ((mag - tau) / mag);
}

}  // namespace detail

// Iterative shrinkage-thresholding on 0.5 |y - Theta s|^2 + lambda |s|_1 with
// unit step (|Theta| <= 1 because Theta is a row subset of a unitary matrix),
// then least squares restricted to {k : |s_k| > 1e-6 max |s|}.
inline L1Result l1_recover(const MeasurementSet& meas, double lambda, std::size_t max_iters) {
  meas.validate();
  detail::require(std::isfinite(lambda) && lambda > 0.0, "l1: lambda must be > 0");
  detail::require(max_iters > 0, "l1: max_iters must be > 0");

  const std::size_t n_bins = meas.signal_length;
  detail::PartialFourierOperator theta(meas);
  L1Result result;
  result.spectrum.assign(n_bins, {});
  auto& s = result.spectrum;

  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    result.iterations = iter;
    auto residual = theta.apply(s);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = meas.values[i] - residual[i];
    const auto correction = theta.adjoint(residual);

    double change = 0.0;
    double norm = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const auto next = detail::soft_threshold(s[k] + correction[k], lambda);
      change += std::norm(next - s[k]);
      norm += std::norm(next);
      s[k] = next;
    }
    if (std::sqrt(change) <= 1e-12 * std::max(1.0, std::sqrt(norm))) break;
  }

  double peak = 0.0;
  for (const auto& v : s) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return result;
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (std::abs(s[k]) > 1e-6 * peak) result.support.push_back(k);
  }

  // Debias: unregularized least squares on the detected support.
  const auto rows = static_cast<Eigen::Index>(meas.sample_indices.size());
  const auto cols = static_cast<Eigen::Index>(result.support.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_bins));
  Eigen::MatrixXcd a(rows, cols);
  Eigen::VectorXcd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    y(i) = meas.values[static_cast<std::size_t>(i)];
    const auto n = static_cast<double>(meas.sample_indices[static_cast<std::size_t>(i)]);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = static_cast<double>(result.support[static_cast<std::size_t>(c)]);
      a(i, c) = std::polar(scale, 2.0 * std::numbers::pi * k * n / static_cast<double>(n_bins));
    }
  }
  const Eigen::VectorXcd coeffs = a.completeOrthogonalDecomposition().solve(y);
  std::fill(s.begin(), s.end(), std::complex<double>{});
  for (Eigen::Index c = 0; c < cols; ++c) s[result.support[static_cast<std::size_t>(c)]] = coeffs(c);
  return result;
}

}  // namespace tfcs
