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

#include "houghvote/voting.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "houghvote/error.h"
#include "houghvote/parallel.h"

namespace houghvote {
namespace {

constexpr std::array<Backend, 4> kAllBackends = {
    Backend::kScatter, Backend::kGather, Backend::kKernel, Backend::kSparse};

struct MapDims {
  int h = 0;
  int w = 0;
  int r = 0;
};

MapDims CheckEvidence(const EvidenceTensor& evidence, int regions) {
  if (evidence.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence must be H x W x R, got " +
                    ShapeString(evidence.shape()));
  }
  if (static_cast<int>(evidence.dim(2)) != regions) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence has " + std::to_string(evidence.dim(2)) +
                    " region channels, field has " + std::to_string(regions));
  }
  return {static_cast<int>(evidence.dim(0)), static_cast<int>(evidence.dim(1)),
          regions};
}

PresenceMap ToPresence(const std::vector<double>& acc, int h, int w) {
  PresenceMap out(Shape{static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i]);
  return out;
}

// One voter entry of Algorithm-style scatter: add value / K_r at every
// in-bounds target of region r placed at (i, j).
inline void ScatterEntry(std::vector<double>& acc, const MapDims& d,
                         const Region& region, int i, int j, float value) {
  const double vote = static_cast<double>(value) / region.count();
  for (const Offset& o : region.offsets) {
    const int y = i + o.dy;
    const int x = j + o.dx;
    if (y < 0 || y >= d.h || x < 0 || x >= d.w) continue;
    acc[static_cast<std::size_t>(y) * d.w + x] += vote;
  }
}

// Horizontal run of region pixels: offsets (dy, lo..hi).
struct Run {
  int dy;
  int lo;
  int hi;
};

std::vector<Run> RowRuns(const Region& region) {
  std::vector<Offset> sorted = region.offsets;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Run> runs;
  for (const Offset& o : sorted) {
    if (!runs.empty() && runs.back().dy == o.dy && runs.back().hi + 1 == o.dx) {
      runs.back().hi = o.dx;
    } else {
      runs.push_back({o.dy, o.dx, o.dx});
    }
  }
  return runs;
}

}  // namespace

Backend ParseBackend(std::string_view name) {
  for (Backend b : kAllBackends) {
    if (BackendName(b) == name) return b;
  }
  throw Error(ErrorCode::kUnknownBackend,
              "unknown backend '" + std::string(name) +
                  "' (expected scatter, gather, kernel or sparse)");
}

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kScatter: return "scatter";
    case Backend::kGather: return "gather";
    case Backend::kKernel: return "kernel";
    case Backend::kSparse: return "sparse";
  }
  return "unknown";
}

std::span<const Backend> AllBackends() { return kAllBackends; }

PresenceMap VoteScatter(const EvidenceTensor& evidence, const VoteField& field) {
  const MapDims d = CheckEvidence(evidence, field.num_regions());
  std::vector<double> acc(static_cast<std::size_t>(d.h) * d.w, 0.0);
  const float* e = evidence.data();
  for (int i = 0; i < d.h; ++i) {
    for (int j = 0; j < d.w; ++j) {
      for (int r = 0; r < d.r; ++r) {
        ScatterEntry(acc, d, field.region(r), i, j, *e++);
      }
    }
  }
  return ToPresence(acc, d.h, d.w);
}

PresenceMap VoteSparse(const EvidenceTensor& evidence, const VoteField& field,
                       double threshold) {
  const MapDims d = CheckEvidence(evidence, field.num_regions());
  struct Entry {
    int i, j, r;
    float value;
  };
  std::vector<Entry> entries;
  const float* e = evidence.data();
  for (int i = 0; i < d.h; ++i) {
    for (int j = 0; j < d.w; ++j) {
      for (int r = 0; r < d.r; ++r, ++e) {
        // Exact zeros contribute nothing, so skipping them keeps the result
        // bit-identical to the dense scatter.
        if (*e == 0.0f || std::abs(static_cast<double>(*e)) < threshold) continue;
        entries.push_back({i, j, r, *e});
      }
    }
  }
  std::vector<double> acc(static_cast<std::size_t>(d.h) * d.w, 0.0);
  for (const Entry& entry : entries) {
    ScatterEntry(acc, d, field.region(entry.r), entry.i, entry.j, entry.value);
  }
  return ToPresence(acc, d.h, d.w);
}

PresenceMap VoteGather(const EvidenceTensor& evidence, const VoteField& field,
                       int threads) {
  const MapDims d = CheckEvidence(evidence, field.num_regions());
  const std::size_t stride = static_cast<std::size_t>(d.w) + 1;

  // prefix[(r * H + i) * (W + 1) + x] = sum of E(i, 0..x-1, r)
  std::vector<double> prefix(static_cast<std::size_t>(d.r) * d.h * stride, 0.0);
  for (int i = 0; i < d.h; ++i) {
    const float* row = evidence.data() + static_cast<std::size_t>(i) * d.w * d.r;
    for (int r = 0; r < d.r; ++r) {
      double* p = prefix.data() + (static_cast<std::size_t>(r) * d.h + i) * stride;
      double running = 0.0;
      for (int x = 0; x < d.w; ++x) {
        running += row[static_cast<std::size_t>(x) * d.r + r];
        p[x + 1] = running;
      }
    }
  }

  std::vector<std::vector<Run>> runs;
  for (const Region& region : field.regions()) runs.push_back(RowRuns(region));

  std::vector<double> acc(static_cast<std::size_t>(d.h) * d.w, 0.0);
  ParallelFor(d.h, threads, [&](std::size_t y_begin, std::size_t y_end) {
    std::vector<double> region_sum(d.w);
    for (int y = static_cast<int>(y_begin); y < static_cast<int>(y_end); ++y) {
      double* out = acc.data() + static_cast<std::size_t>(y) * d.w;
      for (int r = 0; r < d.r; ++r) {
        std::fill(region_sum.begin(), region_sum.end(), 0.0);
        for (const Run& run : runs[r]) {
          const int src = y - run.dy;
          if (src < 0 || src >= d.h) continue;
          const double* p =
              prefix.data() + (static_cast<std::size_t>(r) * d.h + src) * stride;
          // Target x pulls source columns [x - hi, x - lo], clipped to the map.
          // Interior columns need no clipping.
          const int x_lo = std::clamp(run.hi, 0, d.w);
          const int x_hi = std::clamp(d.w - 1 + run.lo + 1, x_lo, d.w);
          for (int x = 0; x < x_lo; ++x) {
            const int a = std::clamp(x - run.hi, 0, d.w);
            const int b = std::clamp(x - run.lo + 1, 0, d.w);
            region_sum[x] += p[b] - p[a];
          }
          for (int x = x_lo; x < x_hi; ++x) {
            region_sum[x] += p[x - run.lo + 1] - p[x - run.hi];
          }
          for (int x = x_hi; x < d.w; ++x) {
            const int a = std::clamp(x - run.hi, 0, d.w);
            const int b = std::clamp(x - run.lo + 1, 0, d.w);
            region_sum[x] += p[b] - p[a];
          }
        }
        const double k = field.count(r);
        for (int x = 0; x < d.w; ++x) out[x] += region_sum[x] / k;
      }
    }
  });
  return ToPresence(acc, d.h, d.w);
}

PresenceMap VoteKernelBank(const EvidenceTensor& evidence,
                           const KernelBank& bank) {
  const MapDims d = CheckEvidence(evidence, bank.num_regions());
  const int side = bank.side();
  const int c = side / 2;

  std::vector<float> plane(static_cast<std::size_t>(d.h) * d.w);
  std::vector<double> acc(static_cast<std::size_t>(d.h) * d.w, 0.0);
  for (int r = 0; r < d.r; ++r) {
    for (std::size_t p = 0; p < plane.size(); ++p) {
      plane[p] = evidence[p * d.r + r];
    }
    const auto kernel = bank.kernel(r);
    // Stride-1 transposed convolution, output cropped by c on every side:
    // input (i, j) reaches output (i + u - c, j + v - c).
    for (int u = 0; u < side; ++u) {
      const int dy = u - c;
      const int i_begin = std::max(0, -dy);
      const int i_end = std::min(d.h, d.h - dy);
      for (int v = 0; v < side; ++v) {
        const double w = kernel[static_cast<std::size_t>(u) * side + v];
        if (w == 0.0) continue;
        const int dx = v - c;
        const int j_begin = std::max(0, -dx);
        const int j_end = std::min(d.w, d.w - dx);
        for (int i = i_begin; i < i_end; ++i) {
          const float* in = plane.data() + static_cast<std::size_t>(i) * d.w;
          double* out = acc.data() + static_cast<std::size_t>(i + dy) * d.w + dx;
          for (int j = j_begin; j < j_end; ++j) out[j] += w * in[j];
        }
      }
    }
  }
  return ToPresence(acc, d.h, d.w);
}

PresenceMap Vote(const EvidenceTensor& evidence, const VoteField& field,
                 const VoteOptions& options) {
  switch (options.backend) {
    case Backend::kScatter:
      return VoteScatter(evidence, field);
    case Backend::kGather:
      return VoteGather(evidence, field, ResolveThreadCount(options.threads));
    case Backend::kKernel:
      return VoteKernelBank(evidence, MaterializeKernels(field));
    case Backend::kSparse:
      return VoteSparse(evidence, field, options.sparse_threshold);
  }
  throw Error(ErrorCode::kUnknownBackend, "unhandled backend");
}

TensorF VoteAllClasses(const TensorF& evidence_stack, const VoteField& field,
                       const VoteOptions& options) {
  if (evidence_stack.rank() != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence stack must be C x H x W x R, got " +
                    ShapeString(evidence_stack.shape()));
  }
  const std::size_t classes = evidence_stack.dim(0);
  const std::size_t h = evidence_stack.dim(1);
  const std::size_t w = evidence_stack.dim(2);
  if (static_cast<int>(evidence_stack.dim(3)) != field.num_regions()) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence stack has " + std::to_string(evidence_stack.dim(3)) +
                    " region channels, field has " +
                    std::to_string(field.num_regions()));
  }

  const int threads = ResolveThreadCount(options.threads);
  const KernelBank bank = options.backend == Backend::kKernel
                              ? MaterializeKernels(field)
                              : KernelBank{};
  TensorF out(Shape{classes, h, w});
  ParallelFor(classes, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t cls = begin; cls < end; ++cls) {
      const EvidenceTensor evidence = evidence_stack.Slice(cls);
      PresenceMap map;
      switch (options.backend) {
        case Backend::kScatter: map = VoteScatter(evidence, field); break;
        case Backend::kGather: map = VoteGather(evidence, field, 1); break;
        case Backend::kKernel: map = VoteKernelBank(evidence, bank); break;
        case Backend::kSparse:
          map = VoteSparse(evidence, field, options.sparse_threshold);
          break;
      }
      std::copy(map.values().begin(), map.values().end(),
                out.data() + cls * h * w);
    }
  });
  return out;
}

EvidenceTensor SelectChannels(const EvidenceTensor& evidence,
                              std::span<const int> channels) {
  if (evidence.rank() != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence must be H x W x R, got " +
                    ShapeString(evidence.shape()));
  }
  const std::size_t r_in = evidence.dim(2);
  for (int ch : channels) {
    if (ch < 0 || static_cast<std::size_t>(ch) >= r_in) {
      throw Error(ErrorCode::kShapeMismatch,
                  "channel " + std::to_string(ch) + " out of range");
    }
  }
  const std::size_t pixels = evidence.dim(0) * evidence.dim(1);
  EvidenceTensor out(Shape{evidence.dim(0), evidence.dim(1), channels.size()});
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t k = 0; k < channels.size(); ++k) {
      out[p * channels.size() + k] = evidence[p * r_in + channels[k]];
    }
  }
  return out;
}

std::vector<int> SourceChannels(const VoteField& field) {
  std::vector<int> channels;
  for (const Region& region : field.regions()) channels.push_back(region.source);
  return channels;
}

FeatureMap FeatureDiff(const FeatureMap& reference, const FeatureMap& auxiliary) {
  if (reference.shape() != auxiliary.shape()) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature maps differ: " + ShapeString(reference.shape()) +
                    " vs " + ShapeString(auxiliary.shape()));
  }
  FeatureMap out(reference.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = reference[i] - auxiliary[i];
  }
  return out;
}

PresenceMap VoteSpatiotemporal(const EvidenceTensor& visual,
                               const EvidenceTensor& temporal,
                               const VoteField& visual_field,
                               const VoteField& temporal_field,
                               const VoteOptions& options) {
  CheckEvidence(visual, visual_field.num_regions());
  CheckEvidence(temporal, temporal_field.num_regions());
  if (visual.dim(0) != temporal.dim(0) || visual.dim(1) != temporal.dim(1)) {
    throw Error(ErrorCode::kShapeMismatch,
                "visual and temporal evidence differ spatially");
  }
  PresenceMap out = Vote(visual, visual_field, options);
  const PresenceMap motion = Vote(temporal, temporal_field, options);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += motion[i];
  return out;
}

TensorF VoteScalable(const TensorF& shared_evidence, const VoteField& field,
                     const ScalableMixWeights& mix, const VoteOptions& options) {
  if (shared_evidence.rank() != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "shared evidence must be N x H x W x R, got " +
                    ShapeString(shared_evidence.shape()));
  }
  const std::size_t n = shared_evidence.dim(0);
  if (mix.conv.rank() != 4 || mix.conv.dim(1) != n || mix.conv.dim(2) != 3 ||
      mix.conv.dim(3) != 3 || mix.bias.size() != mix.conv.dim(0)) {
    throw Error(ErrorCode::kShapeMismatch,
                "mix weights " + ShapeString(mix.conv.shape()) + " with " +
                    std::to_string(mix.bias.size()) +
                    " biases do not fit N=" + std::to_string(n));
  }
  const TensorF votes = VoteAllClasses(shared_evidence, field, options);
  const int h = static_cast<int>(votes.dim(1));
  const int w = static_cast<int>(votes.dim(2));
  const std::size_t classes = mix.conv.dim(0);
  const std::size_t plane = static_cast<std::size_t>(h) * w;

  std::vector<float> rectified(votes.values().begin(), votes.values().end());
  for (float& v : rectified) v = std::max(v, 0.0f);

  TensorF out(Shape{classes, static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  ParallelFor(classes, ResolveThreadCount(options.threads),
              [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(plane);
    for (std::size_t c = begin; c < end; ++c) {
      std::fill(acc.begin(), acc.end(), static_cast<double>(mix.bias[c]));
      for (std::size_t k = 0; k < n; ++k) {
        const float* src = rectified.data() + k * plane;
        for (int a = -1; a <= 1; ++a) {
          for (int b = -1; b <= 1; ++b) {
            const double tap = mix.conv.at({c, k, static_cast<std::size_t>(a + 1),
                                            static_cast<std::size_t>(b + 1)});
            if (tap == 0.0) continue;
            const int y_begin = std::max(0, -a);
            const int y_end = std::min(h, h - a);
            const int x_begin = std::max(0, -b);
            const int x_end = std::min(w, w - b);
            for (int y = y_begin; y < y_end; ++y) {
              const float* in = src + static_cast<std::size_t>(y + a) * w + b;
              double* o = acc.data() + static_cast<std::size_t>(y) * w;
              for (int x = x_begin; x < x_end; ++x) o[x] += tap * in[x];
            }
          }
        }
      }
      float* dst = out.data() + c * plane;
      for (std::size_t p = 0; p < plane; ++p) dst[p] = static_cast<float>(acc[p]);
    }
  });
  return out;
}

}  // namespace houghvote
