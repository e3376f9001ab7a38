// Copyright 2026 The idner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idner/model_io.h"

#include <cstdint>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "idner/errors.h"
#include "idner/rng.h"
#include "testing/oracles.h"

namespace idner {
namespace {

CrfModel RandomCrf(std::uint64_t seed) {
  FeatureConfig config;
  config.hash_dimension = 32;
  config.window = 1;
  CrfModel model(TypedTagSet(), config);
  Rng rng(seed);
  for (double& w : model.parameters()) w = rng.Uniform() * 6.0 - 3.0;
  return model;
}

ClassifierModel RandomClassifier(std::uint64_t seed) {
  FeatureConfig config;
  config.hash_dimension = 64;
  ClassifierModel model(AllTargetClasses(), config);
  Rng rng(seed);
  for (double& w : model.parameters()) w = rng.Uniform() - 0.5;
  return model;
}

std::uint32_t HeaderLength(const std::string& bytes) {
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) {
    n |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[8 + i]))
         << (8 * i);
  }
  return n;
}

// Replaces the JSON header, keeping magic and payload.
std::string WithHeader(const std::string& bytes, const Json& header) {
  const std::uint32_t old_len = HeaderLength(bytes);
  const std::string text = header.dump();
  const auto len = static_cast<std::uint32_t>(text.size());
  std::string out = bytes.substr(0, 8);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  }
  return out + text + bytes.substr(12 + old_len);
}

Json HeaderOf(const std::string& bytes) {
  return Json::parse(bytes.substr(12, HeaderLength(bytes)));
}

TEST(ModelIoTest, CrfRoundTripIsBitExact) {
  const CrfModel model = RandomCrf(1);
  const std::string bytes = SerializeModel(model);
  EXPECT_EQ(bytes.substr(0, 8), "IDNERMDL");
  EXPECT_EQ(PeekModelKind(bytes), ModelKind::kCrf);
  const CrfModel back = DeserializeCrfModel(bytes);
  EXPECT_EQ(back.tag_set(), model.tag_set());
  EXPECT_EQ(back.feature_config(), model.feature_config());
  ASSERT_EQ(back.parameters().size(), model.parameters().size());
  for (std::size_t i = 0; i < model.parameters().size(); ++i) {
    EXPECT_EQ(back.parameters()[i], model.parameters()[i]);
  }
  EXPECT_EQ(SerializeModel(back), bytes);
}

TEST(ModelIoTest, ClassifierRoundTripPredictsIdentically) {
  const ClassifierModel model = RandomClassifier(2);
  const ClassifierModel back =
      DeserializeClassifierModel(SerializeModel(model));
  EXPECT_EQ(back.classes(), model.classes());
  EXPECT_EQ(back.PredictText("they hate gay people"),
            model.PredictText("they hate gay people"));
}

TEST(ModelIoTest, FileRoundTrip) {
  oracle::TempDir dir;
  const CrfModel model = RandomCrf(3);
  SaveModel(model, dir / "tagger.bin");
  const TokenizedText doc = Tokenize("they want to inflame black people");
  EXPECT_EQ(LoadCrfModel(dir / "tagger.bin").Tag(doc), model.Tag(doc));
  EXPECT_THROW(LoadCrfModel(dir / "missing.bin"), IoError);
}

TEST(ModelIoTest, KindMismatch) {
  EXPECT_THROW(DeserializeClassifierModel(SerializeModel(RandomCrf(4))),
               ModelKindError);
  EXPECT_THROW(DeserializeCrfModel(SerializeModel(RandomClassifier(4))),
               ModelKindError);
}

TEST(ModelIoTest, RejectsOtherFormatVersions) {
  const std::string bytes = SerializeModel(RandomCrf(5));
  Json header = HeaderOf(bytes);
  header["format_version"] = kModelFormatVersion + 1;
  EXPECT_THROW(DeserializeCrfModel(WithHeader(bytes, header)),
               FormatVersionError);
}

TEST(ModelIoTest, DetectsCorruption) {
  const std::string bytes = SerializeModel(RandomCrf(6));
  EXPECT_THROW(DeserializeCrfModel(""), CorruptFileError);
  EXPECT_THROW(DeserializeCrfModel("NOTMODEL" + bytes.substr(8)),
               CorruptFileError);
  EXPECT_THROW(DeserializeCrfModel(bytes.substr(0, bytes.size() - 3)),
               CorruptFileError);
  EXPECT_THROW(DeserializeCrfModel(bytes.substr(0, 20)), CorruptFileError);

  std::string flipped = bytes;
  flipped[bytes.size() - 5] ^= 0x10;
  EXPECT_THROW(DeserializeCrfModel(flipped), CorruptFileError);

  Json header = HeaderOf(bytes);
  header["labels"] = Json::array();
  EXPECT_THROW(DeserializeCrfModel(WithHeader(bytes, header)),
               CorruptFileError);
}

TEST(ModelIoTest, EveryPayloadBitFlipIsDetected) {
  const std::string bytes = SerializeModel(RandomClassifier(7));
  const std::size_t payload = 12 + HeaderLength(bytes);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::string damaged = bytes;
    const std::size_t pos = payload + rng.Below(bytes.size() - payload);
    damaged[pos] ^= static_cast<char>(1 << rng.Below(8));
    EXPECT_THROW(DeserializeClassifierModel(damaged), CorruptFileError);
  }
}

}  // namespace
}  // namespace idner
