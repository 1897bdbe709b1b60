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

#include <gtest/gtest.h>
#include <png.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <tuple>

#include "houghvote/error.h"
#include "houghvote/heatmap.h"
#include "houghvote/voting.h"
#include "test_util.h"

namespace houghvote {
namespace {

using testing::Field;
using testing::RandomTensor;
using testing::Rng;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

// Voters for a center derived from the rasterized region grid rather than
// the offset lists.
std::set<std::tuple<int, int, int>> ReflectedField(const VoteField& field, int h,
                                                   int w, int cy, int cx) {
  const auto grid = field.RegionGrid();
  const int side = field.field_side();
  const int radius = field.radius();
  std::set<std::tuple<int, int, int>> out;
  for (int u = 0; u < side; ++u) {
    for (int v = 0; v < side; ++v) {
      const int r = grid[static_cast<std::size_t>(u) * side + v];
      if (r < 0) continue;
      const int i = cy - (u - radius);
      const int j = cx - (v - radius);
      if (i >= 0 && i < h && j >= 0 && j < w) out.insert({i, j, r});
    }
  }
  return out;
}

TEST(AttributeTest, ZeroEvidenceHasNoVotes) {
  const VoteField field = Field(90, {2, 8, 16});
  const EvidenceTensor e(Shape{20, 20, 9});
  EXPECT_TRUE(Attribute(e, field, 10, 10).empty());
  EXPECT_FALSE(Attribute(e, field, 10, 10, /*keep_zeros=*/true).empty());
}

TEST(AttributeTest, SingleVoter) {
  const VoteField field = Field(90, {2, 8, 16});
  EvidenceTensor e(Shape{20, 20, 9});
  const int r = 5;
  e.at({7, 9, static_cast<std::size_t>(r)}) = 3.0f;
  const Offset o = field.offsets(r).front();
  const int cy = 7 + o.dy;
  const int cx = 9 + o.dx;
  const auto records = Attribute(e, field, cy, cx);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].i, 7);
  EXPECT_EQ(records[0].j, 9);
  EXPECT_EQ(records[0].r, r);
  EXPECT_DOUBLE_EQ(records[0].strength, 3.0 / field.count(r));
}

TEST(AttributeTest, DualityWithVoting) {
  Rng rng(53);
  const VoteField field = Field(90, {2, 8, 16});
  for (int trial = 0; trial < 3; ++trial) {
    const EvidenceTensor e = RandomTensor({32, 32, 9}, rng);
    const PresenceMap o = VoteScatter(e, field);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        double total = 0.0;
        for (const auto& rec : Attribute(e, field, y, x)) total += rec.strength;
        const double ref = o.at({static_cast<std::size_t>(y), static_cast<std::size_t>(x)});
        EXPECT_NEAR(total, ref, 1e-5 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST(AttributeTest, CompletenessAgainstReflectedField) {
  Rng rng(59);
  for (const auto& [angle, rings] :
       std::vector<std::pair<int, std::vector<int>>>{{90, {2, 8, 16}}, {60, {4, 10}}}) {
    const VoteField field = Field(angle, rings);
    const int regions = field.num_regions();
    const EvidenceTensor e(Shape{24, 19, static_cast<std::size_t>(regions)}, 1.0f);
    for (int trial = 0; trial < 10; ++trial) {
      const int cy = static_cast<int>(rng.Int(0, 23));
      const int cx = static_cast<int>(rng.Int(0, 18));
      std::set<std::tuple<int, int, int>> got;
      for (const auto& rec : Attribute(e, field, cy, cx)) {
        EXPECT_TRUE(got.insert({rec.i, rec.j, rec.r}).second);
      }
      EXPECT_EQ(got, ReflectedField(field, 24, 19, cy, cx));
    }
  }
}

TEST(AttributeTest, Errors) {
  const VoteField field = Field(90, {2, 8});
  const EvidenceTensor e(Shape{6, 6, 5});
  EXPECT_EQ(CodeOf([&] { Attribute(e, field, 6, 0); }), ErrorCode::kOutOfBounds);
  EXPECT_EQ(CodeOf([&] { Attribute(e, field, 0, -1); }), ErrorCode::kOutOfBounds);
  EXPECT_EQ(CodeOf([&] { Attribute(EvidenceTensor(Shape{6, 6, 4}), field, 0, 0); }),
            ErrorCode::kShapeMismatch);
}

TEST(VoteMapTest, AccumulatesStrengths) {
  const std::vector<VoteRecord> records = {
      {0, 0, 0, 1.0}, {1, 2, 3, 0.5}, {1, 2, 1, 0.25}, {2, 1, 0, -2.0}};
  const PresenceMap map = VoteMap(records, 3, 3);
  const std::vector<float> expected = {1, 0, 0, 0, 0, 0.75f, 0, -2, 0};
  EXPECT_EQ(std::vector<float>(map.values().begin(), map.values().end()), expected);
  EXPECT_EQ(VoteMap({}, 2, 2), PresenceMap(Shape{2, 2}));
  const std::vector<VoteRecord> bad = {{3, 0, 0, 1.0}};
  EXPECT_EQ(CodeOf([&] { VoteMap(bad, 3, 3); }), ErrorCode::kOutOfBounds);
}

TEST(VoteMapTest, MassMatchesPresenceScore) {
  Rng rng(61);
  const VoteField field = Field(90, {2, 8, 16});
  const EvidenceTensor e = RandomTensor({20, 20, 9}, rng, 0.0, 1.0);
  const PresenceMap o = VoteScatter(e, field);
  const auto records = Attribute(e, field, 11, 4);
  const PresenceMap map = VoteMap(records, 20, 20);
  double mass = 0.0;
  for (float v : map.values()) mass += v;
  EXPECT_NEAR(mass, o.at({11, 4}), 1e-5);
}

class InteractionTest : public ::testing::Test {
 protected:
  static constexpr std::size_t kClasses = 3;
  static constexpr int kH = 16;
  static constexpr int kW = 14;

  InteractionTest()
      : field_(Field(90, {2, 8})),
        evidence_(Shape{kClasses, kH, kW, 5}, 1.0f) {}

  std::size_t VoterCount(int cy, int cx) const {
    std::set<std::pair<int, int>> pixels;
    for (const auto& [i, j, r] : ReflectedField(field_, kH, kW, cy, cx)) {
      pixels.insert({i, j});
    }
    return pixels.size();
  }

  static Detection Det(int c, int cy, int cx) {
    Detection d;
    d.class_id = c;
    d.cy = cy;
    d.cx = cx;
    return d;
  }

  VoteField field_;
  TensorF evidence_;
};

TEST_F(InteractionTest, NoDetectionsGivesZeros) {
  const TensorF probs(Shape{kClasses, kH, kW}, 0.3f);
  EXPECT_EQ(ClassInteractions({}, evidence_, probs, field_),
            TensorD(Shape{kClasses, kClasses}));
}

TEST_F(InteractionTest, UniformProbabilities) {
  const TensorF probs(Shape{kClasses, kH, kW}, 1.0f / kClasses);
  const std::vector<Detection> dets = {Det(1, 8, 7), Det(1, 0, 0), Det(2, 15, 3)};
  const TensorD m = ClassInteractions(dets, evidence_, probs, field_);
  const double row1 = (VoterCount(8, 7) + VoterCount(0, 0)) / 3.0;
  const double row2 = VoterCount(15, 3) / 3.0;
  for (std::size_t g = 0; g < kClasses; ++g) {
    EXPECT_EQ(m.at({0, g}), 0.0);
    EXPECT_NEAR(m.at({1, g}), row1, 1e-4);
    EXPECT_NEAR(m.at({2, g}), row2, 1e-4);
  }
}

TEST_F(InteractionTest, OneHotGiverFillsOneColumn) {
  TensorF probs(Shape{kClasses, kH, kW});
  for (std::size_t p = 0; p < static_cast<std::size_t>(kH * kW); ++p) {
    probs[2 * kH * kW + p] = 1.0f;
  }
  const std::vector<Detection> dets = {Det(0, 5, 5)};
  const TensorD m = ClassInteractions(dets, evidence_, probs, field_);
  for (std::size_t a = 0; a < kClasses; ++a) {
    for (std::size_t g = 0; g < kClasses; ++g) {
      const double expected = (a == 0 && g == 2) ? VoterCount(5, 5) : 0.0;
      EXPECT_EQ(m.at({a, g}), expected);
    }
  }
}

TEST_F(InteractionTest, ZeroStrengthVotersIgnored) {
  TensorF sparse(evidence_.shape());
  sparse.at({0, 5, 5, 0}) = 1.0f;
  const TensorF probs(Shape{kClasses, kH, kW}, 1.0f);
  const std::vector<Detection> dets = {Det(0, 5, 5)};
  const TensorD m = ClassInteractions(dets, sparse, probs, field_);
  for (std::size_t g = 0; g < kClasses; ++g) EXPECT_EQ(m.at({0, g}), 1.0);
}

TEST_F(InteractionTest, Errors) {
  const TensorF probs(Shape{kClasses, kH, kW}, 0.5f);
  const std::vector<Detection> bad_class = {Det(3, 0, 0)};
  EXPECT_EQ(CodeOf([&] { ClassInteractions(bad_class, evidence_, probs, field_); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] {
              ClassInteractions({}, evidence_, TensorF(Shape{kClasses, kH, 1}), field_);
            }),
            ErrorCode::kShapeMismatch);
}

TEST(HeatmapTest, JetEndpoints) {
  using Rgb = std::array<std::uint8_t, 3>;
  EXPECT_EQ(JetColor(0.0), (Rgb{0, 0, 128}));
  EXPECT_EQ(JetColor(1.0), (Rgb{128, 0, 0}));
  EXPECT_EQ(JetColor(0.5), (Rgb{128, 255, 128}));
  EXPECT_EQ(JetColor(-3.0), JetColor(0.0));
}

TEST(HeatmapTest, ConstantMapIsMidpointColour) {
  const RgbImage img = RenderHeatmap(PresenceMap(Shape{4, 5}, 2.5f));
  EXPECT_EQ(img.width, 5);
  EXPECT_EQ(img.height, 4);
  for (std::size_t p = 0; p < 20; ++p) {
    EXPECT_EQ(img.pixels[3 * p], 128);
    EXPECT_EQ(img.pixels[3 * p + 1], 255);
    EXPECT_EQ(img.pixels[3 * p + 2], 128);
  }
}

TEST(HeatmapTest, RangeMapsToEndpoints) {
  const RgbImage img = RenderHeatmap(PresenceMap(Shape{1, 2}, std::vector<float>{-4.0f, 7.0f}));
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 0, 128, 128, 0, 0}));
}

TEST(HeatmapTest, UnderlayBlend) {
  const PresenceMap map(Shape{1, 2}, std::vector<float>{0.0f, 1.0f});
  RgbImage under{4, 2, std::vector<std::uint8_t>(24, 200)};
  const RgbImage full = RenderHeatmap(map, under, 1.0);
  EXPECT_EQ(full.width, 4);
  // Pixel (1, 3) comes from map cell (0, 1).
  EXPECT_EQ(full.pixels[(1 * 4 + 3) * 3], 128);
  EXPECT_EQ(full.pixels[(1 * 4 + 1) * 3 + 2], 128);
  EXPECT_EQ(RenderHeatmap(map, under, 0.0), under);
  const RgbImage half = RenderHeatmap(map, under, 0.5);
  EXPECT_EQ(half.pixels[0], 100);   // 0.5 * 0 + 0.5 * 200
  EXPECT_EQ(half.pixels[2], 164);   // 0.5 * 128 + 0.5 * 200

  RgbImage odd{5, 2, std::vector<std::uint8_t>(30, 0)};
  EXPECT_EQ(CodeOf([&] { RenderHeatmap(map, odd); }), ErrorCode::kImageSizeMismatch);
  RgbImage skew{4, 4, std::vector<std::uint8_t>(48, 0)};
  EXPECT_EQ(CodeOf([&] { RenderHeatmap(map, skew); }), ErrorCode::kImageSizeMismatch);
}

RgbImage GoldenImage() {
  PresenceMap map(Shape{6, 9});
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 9; ++x) map.at({y, x}) = static_cast<float>(y * x) - 3.0f;
  }
  return RenderHeatmap(map);
}

std::vector<char> ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(HeatmapTest, PngDecodesToSamePixels) {
  const RgbImage img = GoldenImage();
  const auto path = std::filesystem::temp_directory_path() / "hv_heatmap_roundtrip.png";
  WritePng(img, path);

  png_image decoded{};
  decoded.version = PNG_IMAGE_VERSION;
  ASSERT_TRUE(png_image_begin_read_from_file(&decoded, path.c_str()));
  decoded.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(decoded));
  ASSERT_TRUE(png_image_finish_read(&decoded, nullptr, pixels.data(), 0, nullptr));
  EXPECT_EQ(static_cast<int>(decoded.width), img.width);
  EXPECT_EQ(static_cast<int>(decoded.height), img.height);
  EXPECT_EQ(pixels, img.pixels);

  const auto again = std::filesystem::temp_directory_path() / "hv_heatmap_roundtrip2.png";
  WritePng(img, again);
  EXPECT_EQ(ReadBytes(path), ReadBytes(again));
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST(HeatmapTest, GoldenPng) {
  const std::filesystem::path golden =
      std::filesystem::path(HOUGHVOTE_TEST_DATA_DIR) / "heatmap_golden.png";
  if (std::getenv("HV_UPDATE_GOLDEN") != nullptr) WritePng(GoldenImage(), golden);
  ASSERT_TRUE(std::filesystem::exists(golden));
  const auto path = std::filesystem::temp_directory_path() / "hv_heatmap_golden.png";
  WritePng(GoldenImage(), path);
  EXPECT_EQ(ReadBytes(path), ReadBytes(golden));
  std::filesystem::remove(path);
}

TEST(HeatmapTest, UnwritablePath) {
  EXPECT_EQ(CodeOf([] { WritePng(GoldenImage(), "/nonexistent-dir/x.png"); }),
            ErrorCode::kIoError);
}

}  // namespace
}  // namespace houghvote
