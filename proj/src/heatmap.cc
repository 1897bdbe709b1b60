/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "houghvote/heatmap.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "houghvote/error.h"

namespace houghvote {
namespace {

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

std::array<std::uint8_t, 3> JetColor(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto channel = [t](double center) {
    return ToByte(1.5 - std::abs(4.0 * t - center));
  };
  return {channel(3.0), channel(2.0), channel(1.0)};
}

RgbImage RenderHeatmap(const PresenceMap& map) {
  if (map.rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "heatmap input must be H x W, got " + ShapeString(map.shape()));
  }
  RgbImage image;
  image.height = static_cast<int>(map.dim(0));
  image.width = static_cast<int>(map.dim(1));
  image.pixels.resize(map.size() * 3);
  if (map.size() == 0) return image;

  const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(),
                                                  map.values().end());
  const double lo = *lo_it;
  const double range = static_cast<double>(*hi_it) - lo;
  for (std::size_t p = 0; p < map.size(); ++p) {
    const double t = range > 0.0 ? (map[p] - lo) / range : 0.5;
    const auto rgb = JetColor(t);
    std::copy(rgb.begin(), rgb.end(), image.pixels.begin() + p * 3);
  }
  return image;
}

RgbImage RenderHeatmap(const PresenceMap& map, const RgbImage& underlay,
                       double alpha) {
  const RgbImage heat = RenderHeatmap(map);
  const bool divisible = heat.width > 0 && heat.height > 0 &&
                         underlay.width % heat.width == 0 &&
                         underlay.height % heat.height == 0;
  const int scale = divisible ? underlay.width / heat.width : 0;
  if (!divisible || scale < 1 || underlay.height / heat.height != scale) {
    throw Error(ErrorCode::kImageSizeMismatch,
                "underlay " + std::to_string(underlay.width) + "x" +
                    std::to_string(underlay.height) +
                    " is not an integer multiple of map " +
                    std::to_string(heat.width) + "x" +
                    std::to_string(heat.height));
  }
  RgbImage out = underlay;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const std::size_t src =
          (static_cast<std::size_t>(y / scale) * heat.width + x / scale) * 3;
      const std::size_t dst = (static_cast<std::size_t>(y) * out.width + x) * 3;
      for (int ch = 0; ch < 3; ++ch) {
        const double blended = alpha * heat.pixels[src + ch] +
                               (1.0 - alpha) * underlay.pixels[dst + ch];
        out.pixels[dst + ch] = static_cast<std::uint8_t>(
            std::lround(std::clamp(blended, 0.0, 255.0)));
      }
    }
  }
  return out;
}

RgbImage ImageFromTensor(const TensorF& tensor) {
  if (tensor.rank() != 3 || tensor.dim(2) != 3) {
    throw Error(ErrorCode::kImageSizeMismatch,
                "image tensor must be H x W x 3, got " +
                    ShapeString(tensor.shape()));
  }
  RgbImage image;
  image.height = static_cast<int>(tensor.dim(0));
  image.width = static_cast<int>(tensor.dim(1));
  image.pixels.reserve(tensor.size());
  for (float v : tensor.values()) {
    image.pixels.push_back(static_cast<std::uint8_t>(
        std::lround(std::clamp(static_cast<double>(v), 0.0, 255.0))));
  }
  return image;
}

void WritePng(const RgbImage& image, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(
      std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIoError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIoError, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  // Fixed settings so the same image always produces the same bytes.
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_compression_level(png, 9);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() +
                                             static_cast<std::size_t>(y) *
                                                 image.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace houghvote
