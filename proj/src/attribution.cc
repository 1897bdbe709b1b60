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

#include "houghvote/attribution.h"

#include <algorithm>
#include <string>

#include "houghvote/error.h"

namespace houghvote {

std::vector<VoteRecord> Attribute(const EvidenceTensor& evidence,
                                  const VoteField& field, int cy, int cx,
                                  bool keep_zeros) {
  if (evidence.rank() != 3 ||
      static_cast<int>(evidence.dim(2)) != field.num_regions()) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence " + ShapeString(evidence.shape()) +
                    " does not match a field with " +
                    std::to_string(field.num_regions()) + " regions");
  }
  const int h = static_cast<int>(evidence.dim(0));
  const int w = static_cast<int>(evidence.dim(1));
  if (cy < 0 || cy >= h || cx < 0 || cx >= w) {
    throw Error(ErrorCode::kOutOfBounds,
                "center (" + std::to_string(cy) + ", " + std::to_string(cx) +
                    ") outside " + ShapeString(evidence.shape()));
  }
  std::vector<VoteRecord> records;
  const std::size_t regions = field.num_regions();
  for (int r = 0; r < field.num_regions(); ++r) {
    const double k = field.count(r);
    for (const Offset& o : field.offsets(r)) {
      // The voter sits at target - offset.
      const int i = cy - o.dy;
      const int j = cx - o.dx;
      if (i < 0 || i >= h || j < 0 || j >= w) continue;
      const float e = evidence[(static_cast<std::size_t>(i) * w + j) * regions + r];
      if (e == 0.0f && !keep_zeros) continue;
      records.push_back({i, j, r, static_cast<double>(e) / k});
    }
  }
  return records;
}

PresenceMap VoteMap(std::span<const VoteRecord> records, int h, int w) {
  std::vector<double> acc(static_cast<std::size_t>(h) * w, 0.0);
  for (const VoteRecord& rec : records) {
    if (rec.i < 0 || rec.i >= h || rec.j < 0 || rec.j >= w) {
      throw Error(ErrorCode::kOutOfBounds, "vote record outside the map");
    }
    acc[static_cast<std::size_t>(rec.i) * w + rec.j] += rec.strength;
  }
  PresenceMap out(Shape{static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  for (std::size_t p = 0; p < acc.size(); ++p) out[p] = static_cast<float>(acc[p]);
  return out;
}

TensorD ClassInteractions(std::span<const Detection> detections,
                          const TensorF& evidence_stack,
                          const TensorF& prob_maps, const VoteField& field) {
  if (evidence_stack.rank() != 4 || prob_maps.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected C x H x W x R evidence and C x H x W probabilities");
  }
  const std::size_t classes = evidence_stack.dim(0);
  const std::size_t h = evidence_stack.dim(1);
  const std::size_t w = evidence_stack.dim(2);
  if (prob_maps.shape() != Shape{classes, h, w}) {
    throw Error(ErrorCode::kShapeMismatch,
                "probability maps " + ShapeString(prob_maps.shape()) +
                    " do not match evidence " +
                    ShapeString(evidence_stack.shape()));
  }
  TensorD matrix(Shape{classes, classes});
  const std::size_t plane = h * w;
  for (const Detection& det : detections) {
    if (det.class_id < 0 || static_cast<std::size_t>(det.class_id) >= classes) {
      throw Error(ErrorCode::kShapeMismatch,
                  "detection class " + std::to_string(det.class_id) +
                      " outside 0.." + std::to_string(classes - 1));
    }
    const std::size_t getter = det.class_id;
    const auto records =
        Attribute(evidence_stack.Slice(getter), field, det.cy, det.cx);
    std::vector<std::size_t> voters;
    voters.reserve(records.size());
    for (const VoteRecord& rec : records) {
      voters.push_back(static_cast<std::size_t>(rec.i) * w + rec.j);
    }
    std::sort(voters.begin(), voters.end());
    voters.erase(std::unique(voters.begin(), voters.end()), voters.end());
    for (std::size_t giver = 0; giver < classes; ++giver) {
      double total = 0.0;
      for (std::size_t pix : voters) total += prob_maps[giver * plane + pix];
      matrix.at({getter, giver}) += total;
    }
  }
  return matrix;
}

}  // namespace houghvote
