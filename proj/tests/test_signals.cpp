#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "tfcs/signals.hpp"

using Catch::Approx;
using tfcs::SignalKind;
using tfcs::SignalSpec;

TEST_CASE("generate evaluates each formula on the sample grid", "[signals]") {
  SECTION("chirp and slow start at 1 + 0j when t = 0") {
    for (auto kind : {SignalKind::chirp, SignalKind::slow}) {
      const auto x = tfcs::generate({kind, 1, 10.0, 0.0});
      REQUIRE(x.samples[0].real() == 1.0);
      REQUIRE(x.samples[0].imag() == Approx(0.0).margin(1e-15));
    }
  }

  SECTION("fast at t = 0.05 is exp(j)") {
    // second sample of a grid starting at 0 with fs = 20 sits at t = 0.05
    const auto x = tfcs::generate({SignalKind::fast, 2, 20.0, 0.0});
    REQUIRE(x.samples[1].real() == Approx(0.54030230586).epsilon(1e-10));
    REQUIRE(x.samples[1].imag() == Approx(0.84147098481).epsilon(1e-10));
  }

  SECTION("sample instants are t0 + n/fs") {
    const SignalSpec spec{SignalKind::chirp, 8, 4.0, -1.0};
    const auto x = tfcs::generate(spec);
    REQUIRE(x.size() == 8);
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double t = -1.0 + static_cast<double>(n) / 4.0;
      const auto expected = std::exp(std::complex<double>(0.0, -40.0 * std::numbers::pi * t * t));
      REQUIRE(std::abs(x.samples[n] - expected) < 1e-12);
    }
  }
}

TEST_CASE("generate rejects invalid grids", "[signals]") {
  REQUIRE_THROWS_AS(tfcs::generate({SignalKind::slow, 0, 128.0, 0.0}), tfcs::ParameterError);
  REQUIRE_THROWS_AS(tfcs::generate({SignalKind::slow, 16, 0.0, 0.0}), tfcs::ParameterError);
  REQUIRE_THROWS_AS(tfcs::generate({SignalKind::slow, 16, -3.0, 0.0}), tfcs::ParameterError);
}

TEST_CASE("analytic_if closed forms", "[signals]") {
  REQUIRE(tfcs::analytic_if(SignalKind::chirp, 0.0) == 0.0);
  REQUIRE(tfcs::analytic_if(SignalKind::chirp, 0.5) == Approx(-20.0));
  REQUIRE(tfcs::analytic_if(SignalKind::fast, 0.0) == Approx(5.0));
  REQUIRE(tfcs::analytic_if(SignalKind::slow, 0.0) == Approx(0.6));

  SECTION("chirp IF is odd") {
    for (double t : {0.013, 0.25, 0.7, 0.999}) {
      REQUIRE(tfcs::analytic_if(SignalKind::chirp, -t) == -tfcs::analytic_if(SignalKind::chirp, t));
    }
  }
}

TEST_CASE("generated signals have unit modulus", "[signals][property]") {
  for (auto kind : {SignalKind::slow, SignalKind::fast, SignalKind::chirp}) {
    const auto x = tfcs::generate({kind, 256, 128.0, -1.0});
    for (const auto& v : x.samples) REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-12);
  }
}

TEST_CASE("phase increments agree with analytic IF at the midpoint", "[signals][property]") {
  const SignalSpec base{};
  for (auto kind : {SignalKind::slow, SignalKind::fast, SignalKind::chirp}) {
    SignalSpec spec = base;
    spec.kind = kind;
    const auto x = tfcs::generate(spec);
    for (std::size_t n = 0; n + 1 < x.size(); ++n) {
      const double dphi = std::arg(x.samples[n + 1] * std::conj(x.samples[n]));
      const double numeric = dphi * spec.fs / (2.0 * std::numbers::pi);
      const double mid = spec.time_at(n) + 0.5 / spec.fs;
      INFO("kind " << tfcs::to_string(kind) << " n " << n);
      REQUIRE(std::abs(numeric - tfcs::analytic_if(kind, mid)) < 0.05);
    }
  }
}
