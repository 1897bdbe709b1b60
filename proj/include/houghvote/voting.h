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

#ifndef HOUGHVOTE_VOTING_H_
#define HOUGHVOTE_VOTING_H_

#include <span>
#include <string_view>
#include <vector>

#include "houghvote/tensor.h"
#include "houghvote/vote_field.h"

namespace houghvote {

// Every backend computes the same presence map
//
//   O(y, x) = sum over (i, j, r, k) with (i, j) + offset_r(k) == (y, x)
//             of E(i, j, r) / K_r
//
// with votes landing outside the H x W map dropped. Accumulation is done in
// double and rounded to float once per output pixel, so backends agree to
// within summation-order noise.
enum class Backend {
  kScatter,  // literal per-voter loop, the reference
  kGather,   // per-output-pixel pull using row integrals of each channel
  kKernel,   // transposed convolution with the materialized kernel bank
  kSparse,   // scatter restricted to entries with |e| >= threshold
};

Backend ParseBackend(std::string_view name);
std::string_view BackendName(Backend backend);
std::span<const Backend> AllBackends();

struct VoteOptions {
  Backend backend = Backend::kGather;
  double sparse_threshold = 0.0;
  int threads = 0;  // 0 resolves through ResolveThreadCount
};

PresenceMap VoteScatter(const EvidenceTensor& evidence, const VoteField& field);
PresenceMap VoteGather(const EvidenceTensor& evidence, const VoteField& field,
                       int threads = 1);
PresenceMap VoteKernelBank(const EvidenceTensor& evidence,
                           const KernelBank& bank);
PresenceMap VoteSparse(const EvidenceTensor& evidence, const VoteField& field,
                       double threshold);

PresenceMap Vote(const EvidenceTensor& evidence, const VoteField& field,
                 const VoteOptions& options = {});

// C x H x W x R evidence stack to a C x H x W presence stack. Classes are
// voted independently and in parallel.
TensorF VoteAllClasses(const TensorF& evidence_stack, const VoteField& field,
                       const VoteOptions& options = {});

// Channels of `evidence` picked in the given order, e.g. the Region::source
// indices of a masked field.
EvidenceTensor SelectChannels(const EvidenceTensor& evidence,
                              std::span<const int> channels);
std::vector<int> SourceChannels(const VoteField& field);

// Motion features: reference minus auxiliary frame.
FeatureMap FeatureDiff(const FeatureMap& reference, const FeatureMap& auxiliary);

// Votes visual evidence through the spatial field and motion evidence through
// the temporal field into one presence map.
PresenceMap VoteSpatiotemporal(const EvidenceTensor& visual,
                               const EvidenceTensor& temporal,
                               const VoteField& visual_field,
                               const VoteField& temporal_field,
                               const VoteOptions& options = {});

// Mixing head of the class-shared voting variant.
struct ScalableMixWeights {
  TensorF conv;               // C x N x 3 x 3, cross-correlation taps
  std::vector<float> bias;    // C
};

// N x H x W x R shared evidence to C x H x W presence maps: vote each of the
// N channels, clamp at zero, then a zero-padded 3x3 convolution to C maps.
TensorF VoteScalable(const TensorF& shared_evidence, const VoteField& field,
                     const ScalableMixWeights& mix,
                     const VoteOptions& options = {});

}  // namespace houghvote

#endif  // HOUGHVOTE_VOTING_H_
