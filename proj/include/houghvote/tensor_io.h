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

#ifndef HOUGHVOTE_TENSOR_IO_H_
#define HOUGHVOTE_TENSOR_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "houghvote/decoder.h"
#include "houghvote/tensor.h"

namespace houghvote {

// HVT1 tensor files:
//
//   offset 0  "HVT1"
//   offset 4  dtype   u8   0 = f32, 1 = f64
//   offset 5  ndim    u8   1..4
//   offset 6  dims    ndim x u32, little-endian
//   then      payload row-major, little-endian, no padding
enum class DType : std::uint8_t { kF32 = 0, kF64 = 1 };

inline constexpr char kTensorMagic[4] = {'H', 'V', 'T', '1'};
inline constexpr std::size_t kMaxTensorRank = 4;

using AnyTensor = std::variant<TensorF, TensorD>;

std::vector<std::uint8_t> EncodeTensor(const AnyTensor& tensor);
AnyTensor DecodeTensor(std::span<const std::uint8_t> bytes);

void WriteTensor(const AnyTensor& tensor, const std::filesystem::path& path);
AnyTensor ReadTensor(const std::filesystem::path& path);

// Reads either dtype and converts to f32.
TensorF ReadTensorF32(const std::filesystem::path& path);

// Reorders the last axis (region channels): channel r of the result is
// channel perm[r] of the input. Works for H x W x R and C x H x W x R.
TensorF RemapRegions(const TensorF& evidence, std::span<const int> perm);
TensorD RemapRegions(const TensorD& evidence, std::span<const int> perm);

// JSON array of unique class names, index == class id.
std::vector<std::string> ParseLabelMap(const std::string& json_text);
std::vector<std::string> LoadLabelMap(const std::filesystem::path& path);

// One {"class_id":..,"score":..,"bbox":[x,y,w,h]} object per line. Numbers
// use the shortest representation that round-trips.
void WriteDetectionsJsonl(std::ostream& out, std::span<const Detection> dets);
// COCO results array: {"image_id","category_id","bbox","score"} objects.
void WriteDetectionsCoco(std::ostream& out, std::span<const Detection> dets,
                         long long image_id);
// Reads JSON lines back. The peak cell is recovered from the box center as
// floor(center / stride), which holds whenever offsets lie in [0, 1).
std::vector<Detection> ReadDetectionsJsonl(std::istream& in, int stride);

}  // namespace houghvote

#endif  // HOUGHVOTE_TENSOR_IO_H_
