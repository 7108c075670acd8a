#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>

#include "tfcs/error.hpp"

namespace tfcs {

namespace detail {

// FFTW's planner is not thread-safe; execution of a finished plan is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

enum class FftDirection { forward, backward };

// Owns an in-place complex FFT of fixed length plus its aligned buffer.
// Unnormalized in both directions: forward uses exp(-j2pi nk/K).
class FftPlan {
 public:
  FftPlan(std::size_t length, FftDirection direction) : length_(length) {
    detail::require(length > 0, "fft: length must be > 0");
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * length));
    if (buffer_ == nullptr) throw std::bad_alloc();
    std::scoped_lock lock(detail::fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(length), buffer_, buffer_,
                             direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      fftw_free(buffer_);
      throw std::runtime_error("fft: planner failed");
    }
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  ~FftPlan() {
    std::scoped_lock lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buffer_);
  }

  std::size_t size() const { return length_; }

  std::span<std::complex<double>> data() {
    return {reinterpret_cast<std::complex<double>*>(buffer_), length_};
  }

  void execute() { fftw_execute(plan_); }

 private:
  std::size_t length_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace tfcs
