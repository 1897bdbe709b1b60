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

#ifndef HOUGHVOTE_DECODER_H_
#define HOUGHVOTE_DECODER_H_

#include <span>
#include <vector>

#include "houghvote/tensor.h"

namespace houghvote {

inline constexpr int kDefaultTopK = 100;
inline constexpr double kDefaultScoreThreshold = 0.0;
inline constexpr int kDefaultStride = 4;

struct Peak {
  int cy = 0;
  int cx = 0;
  float score = 0.0f;
  friend bool operator==(const Peak&, const Peak&) = default;
};

// Size and sub-pixel offset maps shared by all classes.
struct AuxMaps {
  TensorF wh;      // H x W x 2, (height, width) in output-map pixels
  TensorF offset;  // H x W x 2, (dy, dx) added to the integer peak cell
  int stride = kDefaultStride;
};

// Box in input-image pixels: top-left corner plus extent.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const Box&, const Box&) = default;
};

struct Detection {
  int class_id = 0;
  float score = 0.0f;
  Box box;
  // Integer peak cell on the output map that produced this detection.
  int cy = 0;
  int cx = 0;
};

// 3x3 non-maximum suppression: a pixel survives when no neighbour (border
// neighbourhoods truncated) is strictly larger. Survivors are ordered by score
// descending, then (cy, cx) ascending, and cut to top_k.
std::vector<Peak> ExtractPeaks(const PresenceMap& map, int top_k = kDefaultTopK);

// Peaks with score >= score_threshold become boxes:
//   center = ((cy + dy) * stride, (cx + dx) * stride)
//   box    = (center_x - w * stride / 2, center_y - h * stride / 2,
//             w * stride, h * stride)
std::vector<Detection> DecodeDetections(
    std::span<const Peak> peaks, const AuxMaps& aux, int class_id,
    double score_threshold = kDefaultScoreThreshold);

// Per-class NMS over a C x H x W stack, pooled and cut to the global top_k.
// Ties are broken by (class_id, cy, cx).
std::vector<Detection> DecodeAll(const TensorF& presence_stack,
                                 const AuxMaps& aux, int top_k = kDefaultTopK,
                                 double score_threshold = kDefaultScoreThreshold);

}  // namespace houghvote

#endif  // HOUGHVOTE_DECODER_H_
