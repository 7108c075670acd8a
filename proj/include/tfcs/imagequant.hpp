#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tfcs/error.hpp"
#include "tfcs/mask.hpp"
#include "tfcs/pgm.hpp"
#include "tfcs/tfa.hpp"

namespace tfcs {

// 8-bit grayscale view of a TFMap. Pixels are stored as doubles in [0,255];
// vmin/vmax record the map range the scaling came from. fs and fft_length
// carry the frequency-axis mapping over from the map.
struct GrayImage {
  Eigen::MatrixXd pixels;
  double vmin = 0.0;
  double vmax = 0.0;
  double fs = 0.0;
  std::size_t fft_length = 0;

  Eigen::Index rows() const { return pixels.rows(); }
  Eigen::Index cols() const { return pixels.cols(); }
};

// Negative values are clipped to 0, then [vmin, vmax] of the clipped map is
// stretched onto [0,255] with round-half-away-from-zero.
inline GrayImage quantize(const TFMap& map) {
  detail::require(map.values.allFinite(), "quantize: map has non-finite values");
  const Eigen::MatrixXd clipped = map.values.cwiseMax(0.0);

  GrayImage img;
  img.fs = map.fs;
  img.fft_length = map.fft_length;
  img.pixels = Eigen::MatrixXd::Zero(clipped.rows(), clipped.cols());
  if (clipped.size() == 0) return img;
  img.vmin = clipped.minCoeff();
  img.vmax = clipped.maxCoeff();
  if (img.vmax == img.vmin) return img;

  const double range = img.vmax - img.vmin;
  const double lo = img.vmin;
  img.pixels = clipped.unaryExpr([lo, range](double v) { return std::round(255.0 * (v - lo) / range); });
  return img;
}

// Rounds pixels (half away from zero) and clamps to [0,255] so the image can
// be stored as 8-bit. Integral pixels pass through unchanged.
inline GrayImage to_8bit(const GrayImage& img) {
  GrayImage out = img;
  out.pixels = img.pixels.unaryExpr([](double v) { return std::clamp(std::round(v), 0.0, 255.0); });
  return out;
}

inline GrayImage apply_mask(const GrayImage& img, const PixelMask& mask) {
  detail::require(mask.rows() == img.rows() && mask.cols() == img.cols(),
                  "apply_mask: mask dimensions do not match the image");
  GrayImage out = img;
  out.pixels = mask.observed.select(img.pixels.array(), 0.0).matrix();
  return out;
}

inline nlohmann::json image_metadata(const GrayImage& img) {
  return {{"vmin", img.vmin}, {"vmax", img.vmax}, {"rows", img.rows()},
          {"cols", img.cols()}, {"fs", img.fs},   {"fft_length", img.fft_length}};
}

// Writes `path` as binary PGM and the scaling metadata to the JSON sidecar.
inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  pgm::write_file(path, img.pixels);
  std::ofstream os(pgm::sidecar_path(path));
  os << image_metadata(img).dump(2) << '\n';
  if (!os) throw std::runtime_error("write_pgm: cannot write metadata for '" + path.string() + "'");
}

// The sidecar is optional; without it the image reads back with an identity
// 0..255 range and no frequency mapping.
inline GrayImage read_pgm(const std::filesystem::path& path) {
  GrayImage img;
  img.pixels = pgm::read_file(path);
  img.vmin = 0.0;
  img.vmax = 255.0;

  const auto meta_path = pgm::sidecar_path(path);
  std::ifstream is(meta_path);
  if (!is) return img;
  try {
    const auto meta = nlohmann::json::parse(is);
    img.vmin = meta.at("vmin").get<double>();
    img.vmax = meta.at("vmax").get<double>();
    img.fs = meta.at("fs").get<double>();
    img.fft_length = meta.at("fft_length").get<std::size_t>();
    if (meta.at("rows").get<Eigen::Index>() != img.rows() || meta.at("cols").get<Eigen::Index>() != img.cols()) {
      throw FormatError("read_pgm: sidecar dimensions disagree with '" + path.string() + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("read_pgm: bad sidecar '" + meta_path.string() + "': " + e.what());
  }
  return img;
}

}  // namespace tfcs
