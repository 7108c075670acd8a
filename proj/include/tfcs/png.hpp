#pragma once

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

#include "tfcs/imagequant.hpp"

namespace tfcs {

// 8-bit grayscale PNG export. Row 0 of the image is the top raster row.
inline void write_png(const GrayImage& img, const std::filesystem::path& path) {
  cv::Mat out(static_cast<int>(img.rows()), static_cast<int>(img.cols()), CV_8UC1);
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      out.at<std::uint8_t>(static_cast<int>(r), static_cast<int>(c)) =
          cv::saturate_cast<std::uint8_t>(img.pixels(r, c));
    }
  }
  if (!cv::imwrite(path.string(), out)) throw std::runtime_error("png: cannot write '" + path.string() + "'");
}

}  // namespace tfcs
