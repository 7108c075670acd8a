#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfcs/error.hpp"
#include "tfcs/imagequant.hpp"
#include "tfcs/mask.hpp"

namespace tfcs {

struct TvParams {
  double epsilon = 1e-2;  // smoothing, in pixel units
  double step = 0.25;     // initial step; only ever halved
  std::size_t max_iters = 5000;
  double tol = 1e-7;      // relative objective change that ends the run

  void validate() const {
    detail::require(std::isfinite(epsilon) && epsilon > 0.0, "tv: epsilon must be > 0");
    detail::require(std::isfinite(step) && step > 0.0, "tv: step must be > 0");
    detail::require(max_iters > 0, "tv: max_iters must be > 0");
    detail::require(std::isfinite(tol) && tol > 0.0, "tv: tol must be > 0");
  }
};

// Smoothed isotropic total variation
//   sum_{i,j} sqrt((s[i+1,j]-s[i,j])^2 + (s[i,j+1]-s[i,j])^2 + eps^2)
// with forward differences and replicate boundary (differences past the last
// row/column are zero). eps = 0 gives the plain discrete TV.
inline double tv_value(const Eigen::MatrixXd& s, double epsilon) {
  detail::require(std::isfinite(epsilon) && epsilon >= 0.0, "tv_value: epsilon must be >= 0");
  const Eigen::Index rows = s.rows();
  const Eigen::Index cols = s.cols();
  const double eps2 = epsilon * epsilon;
  double total = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double v = s(i, j);
      const double dr = i + 1 < rows ? s(i + 1, j) - v : 0.0;
      const double dc = j + 1 < cols ? s(i, j + 1) - v : 0.0;
      total += std::sqrt(dr * dr + dc * dc + eps2);
    }
  }
  return total;
}

namespace detail {

// Fills `grad` with d tv_value / d s and returns tv_value(s, epsilon).
inline double tv_value_and_gradient(const Eigen::MatrixXd& s, double epsilon, Eigen::MatrixXd& grad) {
  const Eigen::Index rows = s.rows();
  const Eigen::Index cols = s.cols();
  const double eps2 = epsilon * epsilon;
  grad.setZero(rows, cols);
  double total = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double v = s(i, j);
      const double dr = i + 1 < rows ? s(i + 1, j) - v : 0.0;
      const double dc = j + 1 < cols ? s(i, j + 1) - v : 0.0;
      const double mag = std::sqrt(dr * dr + dc * dc + eps2);
      total += mag;
      // term (i,j) depends on s(i,j), s(i+1,j) and s(i,j+1)
      const double gr = dr / mag;
      const double gc = dc / mag;
      grad(i, j) -= gr + gc;
      if (i + 1 < rows) grad(i + 1, j) += gr;
      if (j + 1 < cols) grad(i, j + 1) += gc;
    }
  }
  return total;
}

}  // namespace detail

inline Eigen::MatrixXd tv_gradient(const Eigen::MatrixXd& s, double epsilon) {
  detail::require(std::isfinite(epsilon) && epsilon > 0.0, "tv_gradient: epsilon must be > 0");
  Eigen::MatrixXd grad;
  detail::tv_value_and_gradient(s, epsilon, grad);
  return grad;
}

struct InpaintResult {
  GrayImage image;
  std::size_t iterations = 0;
  double objective = 0.0;
  // Smoothed TV of every accepted iterate, starting with the initialization.
  std::vector<double> objective_history;
  bool converged = false;
};

// Raised when backtracking drives the step below 1e-12; carries the best
// (last accepted) iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, InpaintResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const InpaintResult& best() const { return best_; }

 private:
  InpaintResult best_;
};

// Minimizes the smoothed TV subject to keeping every observed pixel at its
// measured value.
//
// Accelerated projected gradient: a momentum point y is stepped along -grad TV,
// then observed pixels are reset to the measurements. The step is halved until
// the quadratic upper bound at y holds. A candidate whose objective exceeds
// the last accepted one is rejected and momentum restarts from the accepted
// iterate, so accepted objectives never increase. Missing pixels start at the
// mean of the observed ones.
inline InpaintResult tv_inpaint(const GrayImage& damaged, const PixelMask& mask, const TvParams& p) {
  p.validate();
  detail::require(mask.rows() == damaged.rows() && mask.cols() == damaged.cols(),
                  "tv_inpaint: mask dimensions do not match the image");
  detail::require(mask.observed_count() > 0, "tv_inpaint: mask has no observed pixels");

  const Eigen::Index rows = damaged.rows();
  const Eigen::Index cols = damaged.cols();
  const auto& observed = mask.observed;
  const Eigen::MatrixXd& measured = damaged.pixels;

  double observed_sum = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (observed(i, j)) observed_sum += measured(i, j);
    }
  }
  const double fill = observed_sum / static_cast<double>(mask.observed_count());

  auto project = [&](Eigen::MatrixXd& m) { m = observed.select(measured.array(), m.array()).matrix(); };

  Eigen::MatrixXd current = observed.select(measured.array(), fill).matrix();
  double objective = tv_value(current, p.epsilon);

  InpaintResult result;
  result.image = damaged;
  result.objective_history.push_back(objective);

  auto finish = [&](InpaintResult& r) {
    r.image.pixels = current.cwiseMax(0.0).cwiseMin(255.0);
    // measurements are already in range, clamping leaves them untouched
    project(r.image.pixels);
    r.objective = objective;
  };

  if (mask.observed_count() == static_cast<std::size_t>(rows * cols)) {
    result.converged = true;
    finish(result);
    return result;
  }

  Eigen::MatrixXd momentum = current;
  Eigen::MatrixXd grad(rows, cols);
  Eigen::MatrixXd candidate(rows, cols);
  double momentum_weight = 1.0;
  double step = p.step;
  bool at_accepted = true;  // momentum point coincides with the accepted iterate

  for (std::size_t iter = 1; iter <= p.max_iters; ++iter) {
    result.iterations = iter;
    const double f_momentum = detail::tv_value_and_gradient(momentum, p.epsilon, grad);

    double f_candidate = 0.0;
    for (;;) {
      candidate = momentum - step * grad;
      project(candidate);
      f_candidate = tv_value(candidate, p.epsilon);
      const Eigen::MatrixXd delta = candidate - momentum;
      const double bound = f_momentum + grad.cwiseProduct(delta).sum() + delta.squaredNorm() / (2.0 * step);
      if (f_candidate <= bound) break;
      step *= 0.5;
      if (step < 1e-12) {
        finish(result);
        throw ConvergenceError("tv_inpaint: step underflow after " + std::to_string(iter) + " iterations",
                               std::move(result));
      }
    }

    if (f_candidate > objective) {
      if (at_accepted) {
        // no descent even from the accepted iterate: stationary to rounding
        result.converged = true;
        break;
      }
      momentum = current;
      momentum_weight = 1.0;
      at_accepted = true;
      continue;
    }

    const double next_weight = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_weight * momentum_weight));
    momentum = candidate + ((momentum_weight - 1.0) / next_weight) * (candidate - current);
    // observed entries of candidate and current are identical, so momentum keeps them exactly
    momentum_weight = next_weight;
    at_accepted = false;

    const double change = (objective - f_candidate) / objective;
    current.swap(candidate);
    objective = f_candidate;
    result.objective_history.push_back(objective);
    if (change < p.tol) {
      result.converged = true;
      break;
    }
  }

  finish(result);
  return result;
}

}  // namespace tfcs
