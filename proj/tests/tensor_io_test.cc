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

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>

#include "houghvote/error.h"
#include "houghvote/voting.h"
#include "test_util.h"

namespace houghvote {
namespace {

using Bytes = std::vector<std::uint8_t>;
using testing::Field;
using testing::MaxRelError;
using testing::RandomTensor;
using testing::Rng;

ErrorCode DecodeError(const Bytes& bytes) {
  try {
    DecodeTensor(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode accepted " << bytes.size() << " bytes";
  return ErrorCode::kIoError;
}

Bytes Header(std::uint8_t dtype, std::vector<std::uint32_t> dims) {
  Bytes b = {'H', 'V', 'T', '1', dtype, static_cast<std::uint8_t>(dims.size())};
  for (std::uint32_t d : dims) {
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(d >> (8 * k)));
  }
  return b;
}

TEST(TensorIoTest, ScalarF32Layout) {
  const Bytes bytes = EncodeTensor(TensorF(Shape{1, 1}, 1.0f));
  const Bytes expected = {'H', 'V', 'T', '1', 0, 2, 1, 0, 0, 0, 1, 0, 0, 0,
                          0x00, 0x00, 0x80, 0x3F};
  EXPECT_EQ(bytes, expected);
}

TEST(TensorIoTest, F64Layout) {
  const Bytes bytes = EncodeTensor(TensorD(Shape{2}, std::vector<double>{1.0, -2.0}));
  Bytes expected = Header(1, {2});
  for (std::uint8_t b : {0, 0, 0, 0, 0, 0, 0xF0, 0x3F, 0, 0, 0, 0, 0, 0, 0, 0xC0}) {
    expected.push_back(b);
  }
  EXPECT_EQ(bytes, expected);
}

TEST(TensorIoTest, MultiByteDimsAreLittleEndian) {
  const Bytes bytes = EncodeTensor(TensorF(Shape{300, 1}));
  EXPECT_EQ(bytes[6], 0x2C);
  EXPECT_EQ(bytes[7], 0x01);
  EXPECT_EQ(bytes.size(), 14u + 300u * 4u);
}

TEST(TensorIoTest, RoundTripProperty) {
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    Shape shape(rng.Int(1, 4));
    for (auto& d : shape) d = rng.Int(1, 6);
    const TensorF f = RandomTensor(shape, rng, -1e6, 1e6);
    if (trial % 2 == 0) {
      EXPECT_EQ(std::get<TensorF>(DecodeTensor(EncodeTensor(f))), f);
    } else {
      std::vector<double> vals(f.size());
      for (auto& v : vals) v = rng.Uniform(-1e300, 1e300);
      const TensorD d(shape, vals);
      EXPECT_EQ(std::get<TensorD>(DecodeTensor(EncodeTensor(d))), d);
    }
  }
}

TEST(TensorIoTest, FileRoundTripAndDeterminism) {
  Rng rng(71);
  const TensorF t = RandomTensor({3, 4, 5}, rng);
  const auto dir = std::filesystem::temp_directory_path();
  WriteTensor(t, dir / "hv_io_a.hvt");
  WriteTensor(t, dir / "hv_io_b.hvt");
  EXPECT_EQ(std::get<TensorF>(ReadTensor(dir / "hv_io_a.hvt")), t);
  EXPECT_EQ(std::filesystem::file_size(dir / "hv_io_a.hvt"), 6u + 12u + 240u);
  const AnyTensor a = ReadTensor(dir / "hv_io_a.hvt");
  const AnyTensor b = ReadTensor(dir / "hv_io_b.hvt");
  EXPECT_EQ(EncodeTensor(a), EncodeTensor(b));

  const TensorD d(Shape{2}, std::vector<double>{0.5, 1.0 / 3.0});
  WriteTensor(d, dir / "hv_io_d.hvt");
  const TensorF narrowed = ReadTensorF32(dir / "hv_io_d.hvt");
  EXPECT_EQ(narrowed[0], 0.5f);
  EXPECT_EQ(narrowed[1], static_cast<float>(1.0 / 3.0));
  for (const char* name : {"hv_io_a.hvt", "hv_io_b.hvt", "hv_io_d.hvt"}) {
    std::filesystem::remove(dir / name);
  }
  try {
    ReadTensor(dir / "hv_io_missing.hvt");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(TensorIoTest, MalformedInputs) {
  EXPECT_EQ(DecodeError({}), ErrorCode::kTruncatedFile);
  EXPECT_EQ(DecodeError({'H', 'V'}), ErrorCode::kTruncatedFile);
  EXPECT_EQ(DecodeError({'H', 'V', 'T', '2', 0, 1, 1, 0, 0, 0, 0, 0, 0, 0}),
            ErrorCode::kBadMagic);
  EXPECT_EQ(DecodeError({'N', 'P', 'Y', 0}), ErrorCode::kBadMagic);
  EXPECT_EQ(DecodeError({'H', 'V', 'T', '1', 0}), ErrorCode::kTruncatedFile);
  EXPECT_EQ(DecodeError(Header(2, {1})), ErrorCode::kUnsupportedDtype);
  EXPECT_EQ(DecodeError(Header(0, {})), ErrorCode::kMalformedHeader);
  EXPECT_EQ(DecodeError(Header(0, {1, 1, 1, 1, 1})), ErrorCode::kMalformedHeader);

  Bytes short_dims = Header(0, {2, 3});
  short_dims.resize(short_dims.size() - 2);
  EXPECT_EQ(DecodeError(short_dims), ErrorCode::kTruncatedFile);

  Bytes payload = EncodeTensor(TensorF(Shape{2, 3}, 1.0f));
  Bytes short_payload(payload.begin(), payload.end() - 1);
  EXPECT_EQ(DecodeError(short_payload), ErrorCode::kTruncatedFile);
  payload.push_back(0);
  EXPECT_EQ(DecodeError(payload), ErrorCode::kMalformedHeader);
}

TEST(RemapTest, IdentityAndInverse) {
  Rng rng(73);
  const TensorF e = RandomTensor({4, 5, 9}, rng);
  std::vector<int> ident(9);
  std::iota(ident.begin(), ident.end(), 0);
  EXPECT_EQ(RemapRegions(e, ident), e);

  const std::vector<int> perm = rng.Permutation(9);
  std::vector<int> inverse(9);
  for (int r = 0; r < 9; ++r) inverse[perm[r]] = r;
  const TensorF p = RemapRegions(e, perm);
  EXPECT_EQ(p.at({2, 3, 4}), e.at({2, 3, static_cast<std::size_t>(perm[4])}));
  EXPECT_EQ(RemapRegions(p, inverse), e);

  const TensorF stack = RandomTensor({2, 3, 3, 9}, rng);
  EXPECT_EQ(RemapRegions(RemapRegions(stack, perm), inverse), stack);

  const std::vector<int> dup = {0, 0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_THROW(RemapRegions(e, dup), Error);
  EXPECT_THROW(RemapRegions(e, std::vector<int>{0, 1}), Error);
}

TEST(RemapTest, EquivariantWithFieldPermutation) {
  Rng rng(79);
  const VoteField field = Field(90, {2, 8, 16});
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> perm = rng.Permutation(9);
    const TensorF e = RandomTensor({17, 21, 9}, rng);
    const TensorF ref = VoteScatter(e, field);
    const TensorF permuted = VoteScatter(RemapRegions(e, perm), PermuteRegions(field, perm));
    EXPECT_LE(MaxRelError(permuted, ref), 1e-6);
  }
}

TEST(LabelMapTest, ParsesAndValidates) {
  EXPECT_EQ(ParseLabelMap(R"(["person", "bicycle", "car"])"),
            (std::vector<std::string>{"person", "bicycle", "car"}));
  EXPECT_THROW(ParseLabelMap("[]"), Error);
  EXPECT_THROW(ParseLabelMap(R"(["a", "a"])"), Error);
  EXPECT_THROW(ParseLabelMap(R"({"a": 1})"), Error);
  EXPECT_THROW(ParseLabelMap("not json"), Error);
}

Detection MakeDet(int c, float score, Box box) {
  Detection d;
  d.class_id = c;
  d.score = score;
  d.box = box;
  return d;
}

TEST(DetectionFormatTest, JsonLines) {
  const std::vector<Detection> dets = {MakeDet(3, 0.9f, {10, 13, 24, 16}),
                                       MakeDet(0, 0.1f, {0.5, -1.25, 0, 2})};
  std::ostringstream out;
  WriteDetectionsJsonl(out, dets);
  EXPECT_EQ(out.str(),
            "{\"class_id\":3,\"score\":0.9,\"bbox\":[10,13,24,16]}\n"
            "{\"class_id\":0,\"score\":0.1,\"bbox\":[0.5,-1.25,0,2]}\n");
}

TEST(DetectionFormatTest, Coco) {
  const std::vector<Detection> dets = {MakeDet(3, 0.9f, {10, 13, 24, 16}),
                                       MakeDet(1, 0.5f, {1, 2, 3, 4})};
  std::ostringstream out;
  WriteDetectionsCoco(out, dets, 42);
  EXPECT_EQ(out.str(),
            "[{\"image_id\":42,\"category_id\":3,\"bbox\":[10,13,24,16],\"score\":0.9},\n"
            " {\"image_id\":42,\"category_id\":1,\"bbox\":[1,2,3,4],\"score\":0.5}]\n");
  std::ostringstream empty;
  WriteDetectionsCoco(empty, {}, 1);
  EXPECT_EQ(empty.str(), "[]\n");
}

TEST(DetectionFormatTest, JsonLinesRoundTrip) {
  // Peak (5, 5), offset (0.25, 0.5), size (4, 6), stride 4.
  const std::vector<Detection> dets = {MakeDet(7, 0.75f, {10, 13, 24, 16})};
  std::stringstream io;
  WriteDetectionsJsonl(io, dets);
  io << "\n";
  const auto back = ReadDetectionsJsonl(io, 4);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].class_id, 7);
  EXPECT_EQ(back[0].score, 0.75f);
  EXPECT_EQ(back[0].box, dets[0].box);
  EXPECT_EQ(back[0].cy, 5);
  EXPECT_EQ(back[0].cx, 5);
  std::istringstream bad("{\"class_id\":1}\n");
  EXPECT_THROW(ReadDetectionsJsonl(bad, 4), Error);
}

}  // namespace
}  // namespace houghvote
