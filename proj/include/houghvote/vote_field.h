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

#ifndef HOUGHVOTE_VOTE_FIELD_H_
#define HOUGHVOTE_VOTE_FIELD_H_

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace houghvote {

// Parameters of a log-polar vote field.
//
// ring_diams are ring extents in pixels, read as diameters: a field with
// ring_diams {2, 8, 16} has a 17x17 footprint and its outermost ring ends at
// distance 8 from the center. The innermost ring is never split by angle.
// A temporal field has a single ring split into four 90 degree quadrants and
// no central region.
struct VoteFieldSpec {
  int angle_bin_deg = 90;
  std::vector<int> ring_diams;
  bool split_center = false;
  bool temporal = false;

  friend bool operator==(const VoteFieldSpec&, const VoteFieldSpec&) = default;
};

// Throws Error(kInvalidSpec) describing the first violated constraint.
void ValidateSpec(const VoteFieldSpec& spec);

// Parses {"angle_bin_deg":90,"ring_diams":[2,8,16],"temporal":false}.
// Missing keys fall back to the VoteFieldSpec defaults, except ring_diams
// which is required for spatial fields and defaults to {8} for temporal ones.
VoteFieldSpec ParseVoteFieldSpec(std::string_view json_text);
VoteFieldSpec LoadVoteFieldSpec(const std::filesystem::path& path);

// Pixel offset relative to the field center. dy grows downwards (rows),
// dx grows to the right (columns).
struct Offset {
  int dy = 0;
  int dx = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

struct Region {
  int ring = 1;     // 1-based ring index, 1 is the center ring
  int sector = -1;  // angular sector, -1 for the unsplit center ring
  int source = 0;   // index of this region in the unmasked field
  std::vector<Offset> offsets;

  int count() const { return static_cast<int>(offsets.size()); }
  friend bool operator==(const Region&, const Region&) = default;
};

// Immutable vote field. Regions are indexed 0..R-1, ring-major and then by
// ascending angle. Angles are measured from the +x axis, counter-clockwise
// as seen on screen (i.e. with y pointing up), so sector 0 of a 90 degree
// field is the upper-right quadrant.
class VoteField {
 public:
  const VoteFieldSpec& spec() const { return spec_; }
  int num_regions() const { return static_cast<int>(regions_.size()); }
  int field_side() const { return side_; }
  int radius() const { return side_ / 2; }
  int num_rings() const { return num_rings_; }

  const Region& region(int r) const { return regions_.at(r); }
  std::span<const Region> regions() const { return regions_; }
  std::span<const Offset> offsets(int r) const { return regions_.at(r).offsets; }
  int count(int r) const { return regions_.at(r).count(); }

  // Total number of (region, pixel) pairs; the vote count cast per voter
  // location when every channel is non-zero.
  int total_offsets() const;

  // Region index at each pixel of the side x side footprint, -1 where no
  // region covers the pixel. Row-major.
  std::vector<int> RegionGrid() const;

  friend bool operator==(const VoteField&, const VoteField&) = default;

 private:
  friend VoteField BuildVoteField(const VoteFieldSpec& spec);
  friend VoteField MaskRegions(const VoteField& field,
                               const std::set<int>& keep_rings);
  friend VoteField PermuteRegions(const VoteField& field,
                                  std::span<const int> perm);

  VoteFieldSpec spec_;
  int side_ = 0;
  int num_rings_ = 0;
  std::vector<Region> regions_;
};

VoteField BuildVoteField(const VoteFieldSpec& spec);

// Four-quadrant, single-ring field of diameter 8 used for motion evidence.
VoteField BuildTemporalField();

// Keeps only regions on the given 1-based rings. The result remembers the
// original index of every kept region in Region::source.
VoteField MaskRegions(const VoteField& field, const std::set<int>& keep_rings);

// Region r of the result is region perm[r] of the input.
VoteField PermuteRegions(const VoteField& field, std::span<const int> perm);

// Throws Error(kNotAPermutation) unless perm is a bijection on [0, n).
void ValidatePermutation(std::span<const int> perm, int n);

// Dense per-region transposed-convolution kernels. Region r has weight
// 1/K_r on each of its pixels and zero elsewhere.
class KernelBank {
 public:
  int num_regions() const { return regions_; }
  int side() const { return side_; }
  std::span<const double> kernel(int r) const {
    return std::span<const double>(weights_).subspan(
        static_cast<std::size_t>(r) * side_ * side_,
        static_cast<std::size_t>(side_) * side_);
  }
  double at(int r, int u, int v) const { return kernel(r)[u * side_ + v]; }

  // Copy of this bank with region r's kernel set to zero.
  KernelBank WithRegionZeroed(int r) const;

 private:
  friend KernelBank MaterializeKernels(const VoteField& field);

  int regions_ = 0;
  int side_ = 0;
  std::vector<double> weights_;
};

KernelBank MaterializeKernels(const VoteField& field);

}  // namespace houghvote

#endif  // HOUGHVOTE_VOTE_FIELD_H_
