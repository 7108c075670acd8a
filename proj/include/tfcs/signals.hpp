#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tfcs/error.hpp"

namespace tfcs {

enum class SignalKind { slow, fast, chirp };

inline std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::slow: return "slow";
    case SignalKind::fast: return "fast";
    case SignalKind::chirp: return "chirp";
  }
  return "?";
}

inline SignalKind parse_signal_kind(std::string_view name) {
  if (name == "slow") return SignalKind::slow;
  if (name == "fast") return SignalKind::fast;
  if (name == "chirp") return SignalKind::chirp;
  throw ParameterError("unknown signal kind '" + std::string(name) + "'");
}

// Sampling grid for one of the three test signals. The defaults cover
// t in [-1, 1) at 128 Hz, which keeps the chirp's +-40 Hz inside Nyquist.
struct SignalSpec {
  SignalKind kind = SignalKind::chirp;
  std::size_t n_samples = 256;
  double fs = 128.0;
  double t0 = -1.0;

  double time_at(std::size_t n) const { return t0 + static_cast<double>(n) / fs; }

  void validate() const {
    detail::require(n_samples >= 1, "signal: n_samples must be >= 1");
    detail::require(std::isfinite(fs) && fs > 0.0, "signal: fs must be > 0");
    detail::require(std::isfinite(t0), "signal: t0 must be finite");
  }
};

struct ComplexSignal {
  std::vector<std::complex<double>> samples;
  double fs = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t n) const { return t0 + static_cast<double>(n) / fs; }
};

// Phase of each test signal; all three are pure phase signals exp(j*phase).
inline double signal_phase(SignalKind kind, double t) {
  using std::numbers::pi;
  switch (kind) {
    case SignalKind::slow: return std::sin(1.2 * pi * t);
    case SignalKind::fast: return std::sin(10.0 * pi * t);
    case SignalKind::chirp: return -40.0 * pi * t * t;
  }
  return 0.0;
}

inline ComplexSignal generate(const SignalSpec& spec) {
  spec.validate();
  ComplexSignal out;
  out.fs = spec.fs;
  out.t0 = spec.t0;
  out.samples.reserve(spec.n_samples);
  for (std::size_t n = 0; n < spec.n_samples; ++n) {
    out.samples.push_back(std::polar(1.0, signal_phase(spec.kind, spec.time_at(n))));
  }
  return out;
}

// Closed-form instantaneous frequency phase'(t) / 2pi, in Hz.
inline double analytic_if(SignalKind kind, double t) {
  using std::numbers::pi;
  switch (kind) {
    case SignalKind::slow: return 0.6 * std::cos(1.2 * pi * t);
    case SignalKind::fast: return 5.0 * std::cos(10.0 * pi * t);
    case SignalKind::chirp: return -40.0 * t;
  }
  return 0.0;
}

inline double analytic_if(const SignalSpec& spec, double t) {
  spec.validate();
  return analytic_if(spec.kind, t);
}

}  // namespace tfcs
