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

#ifndef HOUGHVOTE_HEATMAP_H_
#define HOUGHVOTE_HEATMAP_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "houghvote/tensor.h"

namespace houghvote {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB triples

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Piecewise-linear jet colormap; t is clamped to [0, 1]. 0 maps to dark blue
// (0, 0, 128), 1 to dark red (128, 0, 0).
std::array<std::uint8_t, 3> JetColor(double t);

// Min-max normalized jet rendering of `map`. A constant map renders as the
// colormap midpoint.
RgbImage RenderHeatmap(const PresenceMap& map);

// Same, alpha-blended over `underlay`. The underlay must be the map size or
// an integer multiple of it (same factor on both axes); the heatmap is then
// upscaled with nearest-neighbour sampling. Otherwise kImageSizeMismatch.
RgbImage RenderHeatmap(const PresenceMap& map, const RgbImage& underlay,
                       double alpha = 0.5);

// H x W x 3 tensor with values in [0, 255] to an image (values rounded and
// clamped).
RgbImage ImageFromTensor(const TensorF& tensor);

void WritePng(const RgbImage& image, const std::filesystem::path& path);

}  // namespace houghvote

#endif  // HOUGHVOTE_HEATMAP_H_
