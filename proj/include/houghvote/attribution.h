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

#ifndef HOUGHVOTE_ATTRIBUTION_H_
#define HOUGHVOTE_ATTRIBUTION_H_

#include <span>
#include <vector>

#include "houghvote/decoder.h"
#include "houghvote/tensor.h"
#include "houghvote/vote_field.h"

namespace houghvote {

// One vote received by a target pixel: evidence E(i, j, r) / K_r cast from
// voter (i, j) through region r.
struct VoteRecord {
  int i = 0;
  int j = 0;
  int r = 0;
  double strength = 0.0;
};

// Inverse voting. Enumerates every in-bounds (i, j, r) whose region r,
// placed at (i, j), covers (cy, cx). Zero-strength votes are dropped unless
// keep_zeros is set. The strengths sum to the presence value at (cy, cx).
std::vector<VoteRecord> Attribute(const EvidenceTensor& evidence,
                                  const VoteField& field, int cy, int cx,
                                  bool keep_zeros = false);

// H x W map of vote strength per voter pixel, summed over regions.
PresenceMap VoteMap(std::span<const VoteRecord> records, int h, int w);

// C x C matrix. Row c accumulates, over detections of class c, the class
// probabilities prob_maps(:, i, j) of every distinct voter pixel (i, j) of
// the detection's peak cell. Rows are vote-getters, columns vote-givers.
TensorD ClassInteractions(std::span<const Detection> detections,
                          const TensorF& evidence_stack,
                          const TensorF& prob_maps, const VoteField& field);

}  // namespace houghvote

#endif  // HOUGHVOTE_ATTRIBUTION_H_
