#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tfcs/error.hpp"
#include "tfcs/pgm.hpp"

namespace tfcs {

// Keep round(retain_fraction * total) pixels drawn over the whole image.
struct UniformScheme {
  double retain_fraction = 0.46;
};

// Split rows into a centered low-frequency band (low_band_fraction of the
// rows around the 0 Hz row) and the remaining high band. p_high and p_low are
// fractions of the TOTAL pixel count drawn from each band.
struct BandedScheme {
  double p_high = 0.45;
  double p_low = 0.01;
  double low_band_fraction = 0.125;
};

using MaskScheme = std::variant<UniformScheme, BandedScheme>;

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct PixelMask {
  BoolMatrix observed;  // true = pixel kept
  MaskScheme scheme;
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return observed.rows(); }
  Eigen::Index cols() const { return observed.cols(); }
  std::size_t observed_count() const { return static_cast<std::size_t>(observed.count()); }
};

struct MaskDims {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

// Rows [first, first + count) form the low band.
struct RowBand {
  Eigen::Index first = 0;
  Eigen::Index count = 0;
};

inline RowBand low_band_rows(Eigen::Index rows, double low_band_fraction) {
  const auto count = static_cast<Eigen::Index>(std::llround(low_band_fraction * static_cast<double>(rows)));
  return {rows / 2 - count / 2, count};
}

namespace detail {

// Unbiased draw in [0, bound) from raw 64-bit engine output. Standard library
// distributions are implementation-defined, which would break cross-platform
// reproducibility of masks.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Partial Fisher-Yates: the first `count` entries become a uniform sample.
inline void choose_without_replacement(std::vector<std::size_t>& pool, std::size_t count,
                                       std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
}

inline std::size_t fraction_count(double fraction, std::size_t total, const char* name) {
  require(std::isfinite(fraction) && fraction >= 0.0 && fraction <= 1.0,
          std::string("mask: ") + name + " must be in [0,1]");
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

}  // namespace detail

inline PixelMask make_mask(MaskDims dims, const MaskScheme& scheme, std::uint64_t seed) {
  detail::require(dims.rows > 0 && dims.cols > 0, "mask: dimensions must be positive");
  const auto total = static_cast<std::size_t>(dims.rows * dims.cols);

  PixelMask mask{BoolMatrix::Constant(dims.rows, dims.cols, false), scheme, seed};
  std::mt19937_64 rng(seed);

  // Pixel (r, c) has linear index r * cols + c, i.e. raster order.
  auto mark = [&](const std::vector<std::size_t>& pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto r = static_cast<Eigen::Index>(pool[i]) / dims.cols;
      const auto c = static_cast<Eigen::Index>(pool[i]) % dims.cols;
      mask.observed(r, c) = true;
    }
  };

  if (const auto* u = std::get_if<UniformScheme>(&scheme)) {
    const std::size_t keep = detail::fraction_count(u->retain_fraction, total, "retain_fraction");
    std::vector<std::size_t> pool(total);
    for (std::size_t i = 0; i < total; ++i) pool[i] = i;
    detail::choose_without_replacement(pool, keep, rng);
    mark(pool, keep);
    return mask;
  }

  const auto& b = std::get<BandedScheme>(scheme);
  detail::require(std::isfinite(b.low_band_fraction) && b.low_band_fraction >= 0.0 &&
                      b.low_band_fraction <= 1.0,
                  "mask: low_band_fraction must be in [0,1]");
  const std::size_t keep_high = detail::fraction_count(b.p_high, total, "p_high");
  const std::size_t keep_low = detail::fraction_count(b.p_low, total, "p_low");
  const RowBand band = low_band_rows(dims.rows, b.low_band_fraction);

  std::vector<std::size_t> high_pool;
  std::vector<std::size_t> low_pool;
  for (Eigen::Index r = 0; r < dims.rows; ++r) {
    const bool in_low = r >= band.first && r < band.first + band.count;
    auto& pool = in_low ? low_pool : high_pool;
    for (Eigen::Index c = 0; c < dims.cols; ++c) pool.push_back(static_cast<std::size_t>(r * dims.cols + c));
  }
  detail::require(keep_high <= high_pool.size(),
                  "mask: p_high asks for " + std::to_string(keep_high) + " pixels but the high band holds " +
                      std::to_string(high_pool.size()));
  detail::require(keep_low <= low_pool.size(),
                  "mask: p_low asks for " + std::to_string(keep_low) + " pixels but the low band holds " +
                      std::to_string(low_pool.size()));

  detail::choose_without_replacement(high_pool, keep_high, rng);
  detail::choose_without_replacement(low_pool, keep_low, rng);
  mark(high_pool, keep_high);
  mark(low_pool, keep_low);
  return mask;
}

// Observed-pixel count implied by the scheme for an image of `dims`.
inline std::size_t expected_observed_count(MaskDims dims, const MaskScheme& scheme) {
  const auto total = static_cast<std::size_t>(dims.rows * dims.cols);
  if (const auto* u = std::get_if<UniformScheme>(&scheme)) {
    return detail::fraction_count(u->retain_fraction, total, "retain_fraction");
  }
  const auto& b = std::get<BandedScheme>(scheme);
  return detail::fraction_count(b.p_high, total, "p_high") + detail::fraction_count(b.p_low, total, "p_low");
}

inline nlohmann::json scheme_to_json(const MaskScheme& scheme) {
  if (const auto* u = std::get_if<UniformScheme>(&scheme)) {
    return {{"scheme", "uniform"}, {"parameters", {{"retain_fraction", u->retain_fraction}}}};
  }
  const auto& b = std::get<BandedScheme>(scheme);
  return {{"scheme", "banded"},
          {"parameters",
           {{"p_high", b.p_high}, {"p_low", b.p_low}, {"low_band_fraction", b.low_band_fraction}}}};
}

inline MaskScheme scheme_from_json(const nlohmann::json& j) {
  try {
    const auto name = j.at("scheme").get<std::string>();
    const auto& p = j.at("parameters");
    if (name == "uniform") return UniformScheme{p.at("retain_fraction").get<double>()};
    if (name == "banded") {
      return BandedScheme{p.at("p_high").get<double>(), p.at("p_low").get<double>(),
                          p.at("low_band_fraction").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mask metadata: ") + e.what());
  }
  throw FormatError("mask metadata: unknown scheme");
}

// Mask exchange: PGM with 0 (missing) / 255 (observed) plus a JSON sidecar
// carrying {scheme, parameters, seed, rows, cols}.
inline void write_mask(const PixelMask& mask, const std::filesystem::path& path) {
  pgm::write_file(path, mask.observed.cast<double>().matrix() * 255.0);
  nlohmann::json meta = scheme_to_json(mask.scheme);
  meta["seed"] = mask.seed;
  meta["rows"] = mask.rows();
  meta["cols"] = mask.cols();
  std::ofstream os(pgm::sidecar_path(path));
  os << meta.dump(2) << '\n';
  if (!os) throw std::runtime_error("mask: cannot write metadata for '" + path.string() + "'");
}

inline PixelMask read_mask(const std::filesystem::path& path) {
  const Eigen::MatrixXd pixels = pgm::read_file(path);
  PixelMask mask;
  mask.observed.resize(pixels.rows(), pixels.cols());
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      const double v = pixels(r, c);
      if (v != 0.0 && v != 255.0) throw FormatError("mask: pixels must be 0 or 255");
      mask.observed(r, c) = v == 255.0;
    }
  }
  std::ifstream is(pgm::sidecar_path(path));
  if (!is) throw FormatError("mask: missing metadata '" + pgm::sidecar_path(path).string() + "'");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(is);
    mask.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.at("rows").get<Eigen::Index>() != mask.rows() || meta.at("cols").get<Eigen::Index>() != mask.cols()) {
      throw FormatError("mask: metadata dimensions disagree with the image");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mask metadata: ") + e.what());
  }
  mask.scheme = scheme_from_json(meta);
  return mask;
}

}  // namespace tfcs
