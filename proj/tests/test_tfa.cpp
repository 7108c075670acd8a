#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "tfcs/signals.hpp"
#include "tfcs/tfa.hpp"
#include "oracles.hpp"

using cd = std::complex<double>;

namespace {

tfcs::ComplexSignal random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  tfcs::ComplexSignal x;
  x.fs = 1.0;
  for (std::size_t i = 0; i < n; ++i) x.samples.emplace_back(g(rng), g(rng));
  return x;
}

}  // namespace

TEST_CASE("window construction", "[tfa]") {
  const auto hann = tfcs::make_window(tfcs::WindowKind::hann, 8);
  REQUIRE(hann.coefficients[0] == 0.0);
  REQUIRE(hann.coefficients[4] == 1.0);
  for (std::size_t i = 1; i < 8; ++i) REQUIRE(hann.coefficients[i] == Catch::Approx(hann.coefficients[8 - i]));
  REQUIRE_THROWS_AS(tfcs::make_window(tfcs::WindowKind::rect, 7), tfcs::ParameterError);
  REQUIRE_THROWS_AS(tfcs::make_window(tfcs::WindowKind::rect, 0), tfcs::ParameterError);
}

TEST_CASE("stft matches the direct windowed sum", "[tfa][oracle]") {
  const auto x = random_signal(40, 7);
  const auto w = tfcs::make_window(tfcs::WindowKind::hann, 12);
  const std::size_t k_len = 20;
  const auto s = tfcs::stft(x, w, k_len);
  REQUIRE(s.values.rows() == 20);
  REQUIRE(s.values.cols() == 40);
  for (long n = 0; n < 40; ++n) {
    for (long k = 0; k < 20; ++k) {
      REQUIRE(std::abs(s(n, k) - oracle::stft(x, w, k_len, n, k)) < 1e-10);
    }
  }
}

TEST_CASE("stft of constant and tone inputs", "[tfa]") {
  const std::size_t m = 16;
  const auto rect = tfcs::make_window(tfcs::WindowKind::rect, m);

  SECTION("all-ones input puts M in bin 0 of interior columns") {
    tfcs::ComplexSignal ones{std::vector<cd>(64, cd{1.0, 0.0}), 1.0, 0.0};
    const auto s = tfcs::stft(ones, rect, m);
    for (std::size_t n = m / 2; n + m / 2 < 64; ++n) {
      REQUIRE(std::abs(s(n, 0) - cd(16.0, 0.0)) < 1e-12);
      for (std::size_t k = 1; k < m; ++k) REQUIRE(std::abs(s(n, k)) < 1e-12);
    }
  }

  SECTION("tone at bin 3 peaks with magnitude M") {
    tfcs::ComplexSignal tone;
    for (std::size_t i = 0; i < 64; ++i) {
      tone.samples.push_back(std::polar(1.0, 2.0 * std::numbers::pi * 3.0 * static_cast<double>(i) / m));
    }
    const auto s = tfcs::stft(tone, rect, m);
    for (std::size_t n = m / 2; n + m / 2 < 64; ++n) {
      REQUIRE(std::abs(s(n, 3)) == Catch::Approx(16.0).epsilon(1e-12));
      for (std::size_t k = 0; k < m; ++k) {
        if (k != 3) REQUIRE(std::abs(s(n, k)) < 1e-12);
      }
    }
    const auto spec = tfcs::spectrogram(s);
    // bin 3 moves to row 3 + M/2 after centering
    REQUIRE(spec.values(3 + 8, 20) == Catch::Approx(256.0).epsilon(1e-12));
    REQUIRE(spec.freq_of_bin(11) == Catch::Approx(3.0 / 16.0));
  }

  REQUIRE_THROWS_AS(tfcs::stft(tfcs::ComplexSignal{std::vector<cd>(8), 1.0, 0.0}, rect, 8), tfcs::ParameterError);
  REQUIRE_THROWS_AS(tfcs::stft(tfcs::ComplexSignal{}, rect, 16), tfcs::ParameterError);
}

TEST_CASE("Parseval holds per interior column", "[tfa][property]") {
  const auto x = random_signal(256, 11);
  const auto w = tfcs::make_window(tfcs::WindowKind::hann, 64);
  const std::size_t k_len = 256;
  const auto s = tfcs::stft(x, w, k_len);
  for (std::size_t n = 32; n + 32 <= 256; ++n) {
    const double lhs = s.values.col(static_cast<Eigen::Index>(n)).squaredNorm();
    double rhs = 0.0;
    for (long m = -32; m < 32; ++m) rhs += std::norm(x.samples[n + m] * w.coefficients[m + 32]);
    rhs *= static_cast<double>(k_len);
    REQUIRE(std::abs(lhs - rhs) / rhs < 1e-10);
  }
}

TEST_CASE("spectrogram is nonnegative and zero for a zero signal", "[tfa]") {
  const auto w = tfcs::make_window(tfcs::WindowKind::hann, 16);
  const auto zero = tfcs::spectrogram(tfcs::stft(tfcs::ComplexSignal{std::vector<cd>(32), 1.0, 0.0}, w, 32));
  REQUIRE(zero.values.isZero(0.0));
  const auto spec = tfcs::spectrogram(tfcs::stft(random_signal(50, 3), w, 32));
  REQUIRE(spec.values.minCoeff() >= 0.0);
}

TEST_CASE("s_method", "[tfa]") {
  const auto w = tfcs::make_window(tfcs::WindowKind::hann, 16);
  const auto s = tfcs::stft(random_signal(48, 5), w, 32);

  SECTION("L = 0 equals the spectrogram bit for bit") {
    const auto sm = tfcs::s_method(s, {0});
    const auto spec = tfcs::spectrogram(s);
    REQUIRE((sm.values - spec.values).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("matches the l = -L..L brute-force sum") {
    for (std::size_t half_width : {1u, 2u, 5u}) {
      const auto sm = tfcs::s_method(s, {half_width});
      for (long n = 0; n < 48; ++n) {
        for (long k = 0; k < 32; ++k) {
          const double expected = oracle::s_method_sum(s.values, n, k, static_cast<long>(half_width));
          REQUIRE(std::abs(sm.values(k, n) - expected) <= 1e-9 * (1.0 + std::abs(expected)));
        }
      }
    }
  }

  SECTION("single-bin STFT gives the spectrogram for any L") {
    tfcs::StftMatrix single;
    single.fs = 1.0;
    single.window_length = 16;
    single.fft_length = 32;
    single.values = Eigen::MatrixXcd::Zero(32, 10);
    for (Eigen::Index n = 0; n < 10; ++n) single.values(7, n) = cd(1.5 + static_cast<double>(n), -0.5);
    const auto spec = tfcs::spectrogram(single);
    for (std::size_t half_width : {1u, 4u, 15u}) {
      const auto sm = tfcs::s_method(single, {half_width});
      REQUIRE((sm.values - spec.values).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SECTION("L must stay below K/2") {
    REQUIRE_THROWS_AS(tfcs::s_method(s, {16}), tfcs::ParameterError);
    REQUIRE_NOTHROW(tfcs::s_method(s, {15}));
  }
}

TEST_CASE("S-method ridge of the default chirp follows the analytic IF", "[tfa][oracle]") {
  const tfcs::SignalSpec spec{};
  const auto x = tfcs::generate(spec);
  const auto map = tfcs::s_method(tfcs::stft(x, tfcs::make_window(tfcs::WindowKind::hann, 64), 256), {6});
  std::size_t hits = 0, total = 0;
  for (std::size_t n = 32; n + 32 < spec.n_samples; ++n) {
    Eigen::Index best;
    map.values.col(static_cast<Eigen::Index>(n)).maxCoeff(&best);
    const double target = 128.0 + tfcs::analytic_if(spec.kind, spec.time_at(n)) * 256.0 / spec.fs;
    if (std::abs(static_cast<double>(best) - target) <= 1.0) ++hits;
    ++total;
  }
  REQUIRE(static_cast<double>(hits) / static_cast<double>(total) >= 0.98);
}
