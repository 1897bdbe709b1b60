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

#include "houghvote/vote_field.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "houghvote/error.h"
#include "json.hpp"

namespace houghvote {
namespace {

constexpr int kTemporalDiameter = 8;

[[noreturn]] void InvalidSpec(const std::string& what) {
  throw Error(ErrorCode::kInvalidSpec, what);
}

// Angle of (dy, dx) in degrees within [0, 360), y pointing up. Angles that
// are within rounding noise of an integer degree are snapped so that pixels
// lying exactly on a sector boundary (axes, diagonals) bin deterministically.
double AngleDeg(int dy, int dx) {
  double deg = std::atan2(static_cast<double>(-dy), static_cast<double>(dx)) *
               180.0 / std::numbers::pi;
  const double nearest = std::round(deg);
  if (std::abs(deg - nearest) < 1e-9) deg = nearest;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

int SectorOf(int dy, int dx, int angle_bin_deg) {
  return static_cast<int>(std::floor(AngleDeg(dy, dx) / angle_bin_deg));
}

}  // namespace

void ValidateSpec(const VoteFieldSpec& spec) {
  if (spec.angle_bin_deg <= 0 || spec.angle_bin_deg > 360 ||
      360 % spec.angle_bin_deg != 0) {
    InvalidSpec("angle_bin_deg " + std::to_string(spec.angle_bin_deg) +
                " does not divide 360");
  }
  if (spec.ring_diams.empty()) InvalidSpec("ring_diams is empty");
  for (std::size_t i = 0; i < spec.ring_diams.size(); ++i) {
    const int d = spec.ring_diams[i];
    if (d < 2) InvalidSpec("ring diameter " + std::to_string(d) + " < 2");
    if (d % 2 != 0) InvalidSpec("ring diameter " + std::to_string(d) + " is odd");
    if (i > 0 && d <= spec.ring_diams[i - 1]) {
      InvalidSpec("ring_diams must be strictly ascending");
    }
  }
  if (spec.split_center) {
    InvalidSpec("split_center is not supported; the center ring is never split");
  }
  if (spec.temporal) {
    if (spec.ring_diams.size() != 1) {
      InvalidSpec("temporal fields have exactly one ring");
    }
    if (spec.angle_bin_deg != 90) {
      InvalidSpec("temporal fields use 90 degree quadrants");
    }
  }
}

VoteFieldSpec ParseVoteFieldSpec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    InvalidSpec(std::string("malformed field spec JSON: ") + e.what());
  }
  if (!doc.is_object()) InvalidSpec("field spec must be a JSON object");

  VoteFieldSpec spec;
  try {
    spec.temporal = doc.value("temporal", false);
    spec.split_center = doc.value("split_center", false);
    spec.angle_bin_deg = doc.value("angle_bin_deg", 90);
    if (doc.contains("ring_diams")) {
      spec.ring_diams = doc.at("ring_diams").get<std::vector<int>>();
    } else if (spec.temporal) {
      spec.ring_diams = {kTemporalDiameter};
    } else {
      InvalidSpec("field spec is missing ring_diams");
    }
  } catch (const nlohmann::json::exception& e) {
    InvalidSpec(std::string("bad field spec value: ") + e.what());
  }
  ValidateSpec(spec);
  return spec;
}

VoteFieldSpec LoadVoteFieldSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseVoteFieldSpec(buffer.str());
}

int VoteField::total_offsets() const {
  int total = 0;
  for (const auto& region : regions_) total += region.count();
  return total;
}

std::vector<int> VoteField::RegionGrid() const {
  std::vector<int> grid(static_cast<std::size_t>(side_) * side_, -1);
  const int c = radius();
  for (int r = 0; r < num_regions(); ++r) {
    for (const Offset& o : regions_[r].offsets) {
      grid[static_cast<std::size_t>(o.dy + c) * side_ + (o.dx + c)] = r;
    }
  }
  return grid;
}

VoteField BuildVoteField(const VoteFieldSpec& spec) {
  ValidateSpec(spec);

  VoteField field;
  field.spec_ = spec;
  field.side_ = spec.ring_diams.back() + 1;
  field.num_rings_ = static_cast<int>(spec.ring_diams.size());

  const int sectors = 360 / spec.angle_bin_deg;
  if (spec.temporal) {
    field.regions_.resize(sectors);
    for (int s = 0; s < sectors; ++s) {
      field.regions_[s].ring = 1;
      field.regions_[s].sector = s;
    }
  } else {
    field.regions_.resize(1 + sectors * (field.num_rings_ - 1));
    field.regions_[0].ring = 1;
    for (int ring = 2; ring <= field.num_rings_; ++ring) {
      for (int s = 0; s < sectors; ++s) {
        Region& region = field.regions_[1 + (ring - 2) * sectors + s];
        region.ring = ring;
        region.sector = s;
      }
    }
  }
  for (int r = 0; r < field.num_regions(); ++r) field.regions_[r].source = r;

  std::vector<int> radius_sq;
  for (int d : spec.ring_diams) radius_sq.push_back((d / 2) * (d / 2));

  const int c = field.radius();
  for (int dy = -c; dy <= c; ++dy) {
    for (int dx = -c; dx <= c; ++dx) {
      const int d2 = dy * dy + dx * dx;
      if (spec.temporal) {
        if (d2 == 0 || d2 > radius_sq[0]) continue;
        field.regions_[SectorOf(dy, dx, spec.angle_bin_deg)].offsets.push_back(
            {dy, dx});
        continue;
      }
      // Ring bands are half-open (prev, cur]; the center ring is [0, r0].
      const auto band = std::lower_bound(radius_sq.begin(), radius_sq.end(), d2);
      if (band == radius_sq.end()) continue;
      const int ring = static_cast<int>(band - radius_sq.begin());
      const int r =
          ring == 0 ? 0
                    : 1 + (ring - 1) * sectors + SectorOf(dy, dx, spec.angle_bin_deg);
      field.regions_[r].offsets.push_back({dy, dx});
    }
  }

  for (int r = 0; r < field.num_regions(); ++r) {
    if (field.regions_[r].offsets.empty()) {
      InvalidSpec("region " + std::to_string(r) +
                  " covers no pixels; rings too thin for the angle bin");
    }
  }
  return field;
}

VoteField BuildTemporalField() {
  VoteFieldSpec spec;
  spec.angle_bin_deg = 90;
  spec.ring_diams = {kTemporalDiameter};
  spec.temporal = true;
  return BuildVoteField(spec);
}

VoteField MaskRegions(const VoteField& field, const std::set<int>& keep_rings) {
  if (keep_rings.empty()) {
    throw Error(ErrorCode::kEmptySelection, "no rings selected");
  }
  for (int ring : keep_rings) {
    if (ring < 1 || ring > field.num_rings()) {
      InvalidSpec("ring index " + std::to_string(ring) + " outside 1.." +
                  std::to_string(field.num_rings()));
    }
  }
  VoteField masked = field;
  masked.regions_.clear();
  for (const Region& region : field.regions_) {
    if (keep_rings.contains(region.ring)) masked.regions_.push_back(region);
  }
  if (masked.regions_.empty()) {
    throw Error(ErrorCode::kEmptySelection, "selection keeps no regions");
  }
  return masked;
}

void ValidatePermutation(std::span<const int> perm, int n) {
  if (static_cast<int>(perm.size()) != n) {
    throw Error(ErrorCode::kNotAPermutation,
                "permutation has " + std::to_string(perm.size()) +
                    " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) {
      throw Error(ErrorCode::kNotAPermutation,
                  "entry " + std::to_string(p) + " repeated or out of range");
    }
    seen[p] = true;
  }
}

VoteField PermuteRegions(const VoteField& field, std::span<const int> perm) {
  ValidatePermutation(perm, field.num_regions());
  VoteField permuted = field;
  for (int r = 0; r < field.num_regions(); ++r) {
    permuted.regions_[r] = field.regions_[perm[r]];
  }
  return permuted;
}

KernelBank KernelBank::WithRegionZeroed(int r) const {
  KernelBank copy = *this;
  const std::size_t n = static_cast<std::size_t>(side_) * side_;
  std::fill_n(copy.weights_.begin() + static_cast<std::size_t>(r) * n, n, 0.0);
  return copy;
}

KernelBank MaterializeKernels(const VoteField& field) {
  KernelBank bank;
  bank.regions_ = field.num_regions();
  bank.side_ = field.field_side();
  const std::size_t n = static_cast<std::size_t>(bank.side_) * bank.side_;
  bank.weights_.assign(n * bank.regions_, 0.0);
  const int c = field.radius();
  for (int r = 0; r < bank.regions_; ++r) {
    const double w = 1.0 / field.count(r);
    for (const Offset& o : field.offsets(r)) {
      bank.weights_[r * n + static_cast<std::size_t>(o.dy + c) * bank.side_ +
                    (o.dx + c)] = w;
    }
  }
  return bank;
}

}  // namespace houghvote
