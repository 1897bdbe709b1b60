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

#include "houghvote/decoder.h"

#include <algorithm>
#include <string>

#include "houghvote/error.h"

namespace houghvote {
namespace {

void CheckAux(const AuxMaps& aux, std::size_t h, std::size_t w) {
  const Shape expected{h, w, 2};
  if (aux.wh.shape() != expected || aux.offset.shape() != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                "aux maps " + ShapeString(aux.wh.shape()) + " / " +
                    ShapeString(aux.offset.shape()) + " do not match " +
                    ShapeString(expected));
  }
  if (aux.stride < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "stride must be >= 1, got " + std::to_string(aux.stride));
  }
}

bool PeakBefore(const Peak& a, const Peak& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.cy != b.cy) return a.cy < b.cy;
  return a.cx < b.cx;
}

}  // namespace

std::vector<Peak> ExtractPeaks(const PresenceMap& map, int top_k) {
  if (map.rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "presence map must be H x W, got " + ShapeString(map.shape()));
  }
  if (top_k < 1) {
    throw Error(ErrorCode::kInvalidSpec, "top_k must be >= 1");
  }
  const int h = static_cast<int>(map.dim(0));
  const int w = static_cast<int>(map.dim(1));
  std::vector<Peak> peaks;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float v = map[static_cast<std::size_t>(y) * w + x];
      bool is_max = true;
      for (int ny = std::max(0, y - 1); is_max && ny <= std::min(h - 1, y + 1); ++ny) {
        for (int nx = std::max(0, x - 1); nx <= std::min(w - 1, x + 1); ++nx) {
          if (map[static_cast<std::size_t>(ny) * w + nx] > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({y, x, v});
    }
  }
  const std::size_t keep = std::min<std::size_t>(peaks.size(), top_k);
  std::partial_sort(peaks.begin(), peaks.begin() + keep, peaks.end(), PeakBefore);
  peaks.resize(keep);
  return peaks;
}

std::vector<Detection> DecodeDetections(std::span<const Peak> peaks,
                                        const AuxMaps& aux, int class_id,
                                        double score_threshold) {
  if (aux.wh.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "wh map must be H x W x 2, got " + ShapeString(aux.wh.shape()));
  }
  const std::size_t h = aux.wh.dim(0);
  const std::size_t w = aux.wh.dim(1);
  CheckAux(aux, h, w);

  std::vector<Detection> out;
  for (const Peak& peak : peaks) {
    if (peak.cy < 0 || peak.cx < 0 || static_cast<std::size_t>(peak.cy) >= h ||
        static_cast<std::size_t>(peak.cx) >= w) {
      throw Error(ErrorCode::kOutOfBounds, "peak outside the map");
    }
    if (peak.score < score_threshold) continue;
    const std::size_t cy = peak.cy;
    const std::size_t cx = peak.cx;
    const double stride = aux.stride;
    const double center_y = (peak.cy + static_cast<double>(aux.offset.at({cy, cx, 0}))) * stride;
    const double center_x = (peak.cx + static_cast<double>(aux.offset.at({cy, cx, 1}))) * stride;
    const double box_h = static_cast<double>(aux.wh.at({cy, cx, 0})) * stride;
    const double box_w = static_cast<double>(aux.wh.at({cy, cx, 1})) * stride;

    Detection det;
    det.class_id = class_id;
    det.score = peak.score;
    det.box = {center_x - box_w / 2.0, center_y - box_h / 2.0, box_w, box_h};
    det.cy = peak.cy;
    det.cx = peak.cx;
    out.push_back(det);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  return out;
}

std::vector<Detection> DecodeAll(const TensorF& presence_stack,
                                 const AuxMaps& aux, int top_k,
                                 double score_threshold) {
  if (presence_stack.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "presence stack must be C x H x W, got " +
                    ShapeString(presence_stack.shape()));
  }
  if (top_k < 1) {
    throw Error(ErrorCode::kInvalidSpec, "top_k must be >= 1");
  }
  CheckAux(aux, presence_stack.dim(1), presence_stack.dim(2));

  struct Candidate {
    int class_id;
    Peak peak;
  };
  std::vector<Candidate> pool;
  for (std::size_t c = 0; c < presence_stack.dim(0); ++c) {
    // Every global top-k candidate is within its own class's top-k.
    for (const Peak& p : ExtractPeaks(presence_stack.Slice(c), top_k)) {
      pool.push_back({static_cast<int>(c), p});
    }
  }
  const auto before = [](const Candidate& a, const Candidate& b) {
    if (a.peak.score != b.peak.score) return a.peak.score > b.peak.score;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    if (a.peak.cy != b.peak.cy) return a.peak.cy < b.peak.cy;
    return a.peak.cx < b.peak.cx;
  };
  const std::size_t keep = std::min<std::size_t>(pool.size(), top_k);
  std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(), before);
  pool.resize(keep);

  std::vector<Detection> out;
  for (const Candidate& cand : pool) {
    const std::vector<Detection> one = DecodeDetections(
        std::span<const Peak>(&cand.peak, 1), aux, cand.class_id,
        score_threshold);
    out.insert(out.end(), one.begin(), one.end());
  }
  return out;
}

}  // namespace houghvote
