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

#include "houghvote/tensor_io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "houghvote/error.h"
#include "houghvote/vote_field.h"
#include "json.hpp"

namespace houghvote {
namespace {

constexpr std::size_t kPrefixBytes = 6;

template <typename U>
void PutLittleEndian(std::vector<std::uint8_t>& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
  }
}

template <typename U>
U GetLittleEndian(const std::uint8_t* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    value |= static_cast<U>(p[b]) << (8 * b);
  }
  return value;
}

template <typename T>
struct Bits;
template <>
struct Bits<float> {
  using type = std::uint32_t;
  static constexpr DType kDType = DType::kF32;
};
template <>
struct Bits<double> {
  using type = std::uint64_t;
  static constexpr DType kDType = DType::kF64;
};

template <typename T>
std::vector<std::uint8_t> Encode(const Tensor<T>& tensor) {
  if (tensor.rank() < 1 || tensor.rank() > kMaxTensorRank) {
    throw Error(ErrorCode::kMalformedHeader,
                "tensor rank " + std::to_string(tensor.rank()) +
                    " outside 1.." + std::to_string(kMaxTensorRank));
  }
  std::vector<std::uint8_t> out(std::begin(kTensorMagic), std::end(kTensorMagic));
  out.reserve(kPrefixBytes + 4 * tensor.rank() + sizeof(T) * tensor.size());
  out.push_back(static_cast<std::uint8_t>(Bits<T>::kDType));
  out.push_back(static_cast<std::uint8_t>(tensor.rank()));
  for (std::size_t d : tensor.shape()) {
    if (d > 0xFFFFFFFFu) {
      throw Error(ErrorCode::kMalformedHeader, "dimension exceeds u32");
    }
    PutLittleEndian(out, static_cast<std::uint32_t>(d));
  }
  for (T v : tensor.values()) {
    PutLittleEndian(out, std::bit_cast<typename Bits<T>::type>(v));
  }
  return out;
}

template <typename T>
Tensor<T> DecodePayload(Shape shape, const std::uint8_t* p) {
  std::vector<T> data(NumElements(shape));
  for (T& v : data) {
    v = std::bit_cast<T>(GetLittleEndian<typename Bits<T>::type>(p));
    p += sizeof(T);
  }
  return Tensor<T>(std::move(shape), std::move(data));
}

std::string FormatNumber(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kShapeMismatch, "non-finite value in detection");
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatScore(float v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kShapeMismatch, "non-finite detection score");
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatBox(const Box& box) {
  return "[" + FormatNumber(box.x) + "," + FormatNumber(box.y) + "," +
         FormatNumber(box.w) + "," + FormatNumber(box.h) + "]";
}

template <typename T>
Tensor<T> RemapLastAxis(const Tensor<T>& evidence, std::span<const int> perm) {
  if (evidence.rank() != 3 && evidence.rank() != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected H x W x R or C x H x W x R, got " +
                    ShapeString(evidence.shape()));
  }
  const std::size_t regions = evidence.shape().back();
  ValidatePermutation(perm, static_cast<int>(regions));
  Tensor<T> out(evidence.shape());
  for (std::size_t base = 0; base < evidence.size(); base += regions) {
    for (std::size_t r = 0; r < regions; ++r) {
      out[base + r] = evidence[base + perm[r]];
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> EncodeTensor(const AnyTensor& tensor) {
  return std::visit([](const auto& t) { return Encode(t); }, tensor);
}

AnyTensor DecodeTensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kTensorMagic)) {
    throw Error(ErrorCode::kTruncatedFile, "file shorter than the magic");
  }
  if (!std::equal(std::begin(kTensorMagic), std::end(kTensorMagic),
                  bytes.begin(), [](char a, std::uint8_t b) {
                    return static_cast<std::uint8_t>(a) == b;
                  })) {
    throw Error(ErrorCode::kBadMagic, "missing HVT1 magic");
  }
  if (bytes.size() < kPrefixBytes) {
    throw Error(ErrorCode::kTruncatedFile, "header cut short");
  }
  const std::uint8_t dtype = bytes[4];
  if (dtype > static_cast<std::uint8_t>(DType::kF64)) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "dtype code " + std::to_string(dtype));
  }
  const std::size_t ndim = bytes[5];
  if (ndim < 1 || ndim > kMaxTensorRank) {
    throw Error(ErrorCode::kMalformedHeader,
                "ndim " + std::to_string(ndim) + " outside 1..4");
  }
  const std::size_t header = kPrefixBytes + 4 * ndim;
  if (bytes.size() < header) {
    throw Error(ErrorCode::kTruncatedFile, "dimension table cut short");
  }
  Shape shape(ndim);
  for (std::size_t d = 0; d < ndim; ++d) {
    shape[d] = GetLittleEndian<std::uint32_t>(bytes.data() + kPrefixBytes + 4 * d);
  }
  const std::size_t elem = dtype == 0 ? sizeof(float) : sizeof(double);
  const std::size_t expected = header + NumElements(shape) * elem;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncatedFile,
                "payload holds " + std::to_string(bytes.size() - header) +
                    " bytes, shape " + ShapeString(shape) + " needs " +
                    std::to_string(expected - header));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kMalformedHeader,
                std::to_string(bytes.size() - expected) +
                    " trailing bytes after payload");
  }
  if (dtype == 0) return DecodePayload<float>(std::move(shape), bytes.data() + header);
  return DecodePayload<double>(std::move(shape), bytes.data() + header);
}

void WriteTensor(const AnyTensor& tensor, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeTensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

AnyTensor ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return DecodeTensor(bytes);
}

TensorF ReadTensorF32(const std::filesystem::path& path) {
  AnyTensor any = ReadTensor(path);
  if (auto* f = std::get_if<TensorF>(&any)) return std::move(*f);
  const TensorD& d = std::get<TensorD>(any);
  std::vector<float> data(d.values().begin(), d.values().end());
  return TensorF(d.shape(), std::move(data));
}

TensorF RemapRegions(const TensorF& evidence, std::span<const int> perm) {
  return RemapLastAxis(evidence, perm);
}

TensorD RemapRegions(const TensorD& evidence, std::span<const int> perm) {
  return RemapLastAxis(evidence, perm);
}

std::vector<std::string> ParseLabelMap(const std::string& json_text) {
  std::vector<std::string> labels;
  try {
    labels = nlohmann::json::parse(json_text).get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec,
                std::string("label map must be a JSON array of strings: ") +
                    e.what());
  }
  if (labels.empty()) throw Error(ErrorCode::kInvalidSpec, "label map is empty");
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw Error(ErrorCode::kInvalidSpec, "label names are not unique");
  }
  return labels;
}

std::vector<std::string> LoadLabelMap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseLabelMap(buffer.str());
}

void WriteDetectionsJsonl(std::ostream& out, std::span<const Detection> dets) {
  for (const Detection& d : dets) {
    out << "{\"class_id\":" << d.class_id << ",\"score\":" << FormatScore(d.score)
        << ",\"bbox\":" << FormatBox(d.box) << "}\n";
  }
}

void WriteDetectionsCoco(std::ostream& out, std::span<const Detection> dets,
                         long long image_id) {
  out << "[";
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const Detection& d = dets[i];
    out << (i ? ",\n " : "") << "{\"image_id\":" << image_id
        << ",\"category_id\":" << d.class_id << ",\"bbox\":" << FormatBox(d.box)
        << ",\"score\":" << FormatScore(d.score) << "}";
  }
  out << "]\n";
}

std::vector<Detection> ReadDetectionsJsonl(std::istream& in, int stride) {
  std::vector<Detection> dets;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      Detection d;
      d.class_id = doc.at("class_id").get<int>();
      d.score = doc.at("score").get<float>();
      const auto bbox = doc.at("bbox").get<std::vector<double>>();
      if (bbox.size() != 4) {
        throw Error(ErrorCode::kShapeMismatch, "bbox needs four numbers");
      }
      d.box = {bbox[0], bbox[1], bbox[2], bbox[3]};
      d.cy = static_cast<int>(std::floor((d.box.y + d.box.h / 2.0) / stride));
      d.cx = static_cast<int>(std::floor((d.box.x + d.box.w / 2.0) / stride));
      dets.push_back(d);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kShapeMismatch,
                  std::string("bad detection line: ") + e.what());
    }
  }
  return dets;
}

}  // namespace houghvote
