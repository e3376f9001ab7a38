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

#include "idner/features.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "idner/errors.h"

namespace idner {
namespace {

bool Contains(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

TEST(HashTest, Fnv1aReferenceValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(HashTest, MaskedToDimension) {
  for (std::uint32_t dim : {1u, 2u, 64u, 1u << 18}) {
    EXPECT_EQ(HashFeature("w=muslim", dim), Fnv1a64("w=muslim") & (dim - 1));
    EXPECT_LT(HashFeature("w=muslim", dim), dim);
  }
}

TEST(WordShapeTest, CompressesRuns) {
  EXPECT_EQ(WordShape("Hamas"), "Xx");
  EXPECT_EQ(WordShape("LGBT"), "X");
  EXPECT_EQ(WordShape("non-white"), "x-x");
  EXPECT_EQ(WordShape("2024"), "9");
  EXPECT_EQ(WordShape("Über"), "Xx");
}

TEST(TokenFeaturesTest, NamesForHamas) {
  FeatureConfig config;
  config.window = 1;
  const TokenizedText doc = Tokenize("against Hamas today");
  const auto names = TokenFeatureNames(doc, 1, config);
  EXPECT_TRUE(Contains(names, "bias"));
  EXPECT_TRUE(Contains(names, "w=hamas"));
  EXPECT_TRUE(Contains(names, "shape=Xx"));
  EXPECT_TRUE(Contains(names, "p1=h"));
  EXPECT_TRUE(Contains(names, "p3=ham"));
  EXPECT_TRUE(Contains(names, "s2=as"));
  EXPECT_TRUE(Contains(names, "w[-1]=against"));
  EXPECT_TRUE(Contains(names, "w[+1]=today"));
  EXPECT_FALSE(Contains(names, "BOS"));
  EXPECT_FALSE(Contains(names, "EOS"));
}

TEST(TokenFeaturesTest, BoundaryMarkersAndWindowClipping) {
  const FeatureConfig config;
  const TokenizedText doc = Tokenize("muslim");
  const auto names = TokenFeatureNames(doc, 0, config);
  EXPECT_TRUE(Contains(names, "BOS"));
  EXPECT_TRUE(Contains(names, "EOS"));
  for (const std::string& n : names) EXPECT_NE(n.rfind("w[", 0), 0u) << n;
  EXPECT_THROW(TokenFeatureNames(doc, 1, config), IndexError);
}

TEST(TokenFeaturesTest, CasingOnlyChangesTheShapeFeature) {
  const FeatureConfig config;
  auto a = TokenFeatureNames(Tokenize("muslim"), 0, config);
  auto b = TokenFeatureNames(Tokenize("Muslim"), 0, config);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::string> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(diff));
  EXPECT_EQ(diff, (std::vector<std::string>{"shape=Xx", "shape=x"}));
}

TEST(TokenFeaturesTest, IdenticalSentencesGiveIdenticalVectors) {
  const FeatureConfig config;
  const TokenizedText doc = Tokenize("they want to inflame black people");
  EXPECT_EQ(SequenceFeatures(doc, config),
            SequenceFeatures(Tokenize(doc.text()), config));
  for (const SparseVector& v : SequenceFeatures(doc, config)) {
    EXPECT_EQ(v.dimension(), config.hash_dimension);
  }
}

TEST(TokenFeaturesTest, WithoutLowercasingWordsDiffer) {
  FeatureConfig config;
  config.lowercase = false;
  EXPECT_NE(TokenFeatures(Tokenize("Muslim"), 0, config),
            TokenFeatures(Tokenize("muslim"), 0, config));
}

TEST(TextFeaturesTest, CountsUnigramsBigramsAndCharNgrams) {
  FeatureConfig config;
  config.char_ngram_min = 3;
  config.char_ngram_max = 3;
  const auto counts = TextFeatureCounts("Gay gay men", config);
  auto count = [&](const std::string& name) {
    for (const auto& [n, c] : counts) {
      if (n == name) return c;
    }
    return 0;
  };
  EXPECT_EQ(count("u=gay"), 2);
  EXPECT_EQ(count("u=men"), 1);
  EXPECT_EQ(count("b=gay gay"), 1);
  EXPECT_EQ(count("b=gay men"), 1);
  EXPECT_EQ(count("c=<ga"), 2);
  EXPECT_EQ(count("c=ay>"), 2);
  EXPECT_EQ(count("c=men"), 1);
  EXPECT_EQ(count("c=gay"), 2);
  EXPECT_EQ(count("c=<gay"), 0);  // trigrams only
}

TEST(TextFeaturesTest, UnitNormAndCaseInsensitive) {
  const FeatureConfig config;
  const SparseVector v = TextFeatures("They hate Muslim people", config);
  EXPECT_NEAR(v.Norm(), 1.0, 1e-12);
  EXPECT_EQ(v, TextFeatures("they hate muslim people", config));
  EXPECT_EQ(TextFeatures("muslim", config), TextFeatures("Muslim", config));
  EXPECT_TRUE(TextFeatures("", config).empty());
}

TEST(TextFeaturesTest, WordOrderOnlyAffectsBigrams) {
  FeatureConfig config;
  const auto a = TextFeatureCounts("black people hate", config);
  const auto b = TextFeatureCounts("hate black people", config);
  auto without_bigrams = [](std::vector<std::pair<std::string, int>> v) {
    std::erase_if(v, [](const auto& p) { return p.first.rfind("b=", 0) == 0; });
    return v;
  };
  EXPECT_EQ(without_bigrams(a), without_bigrams(b));
  EXPECT_NE(a, b);
}

TEST(SparseVectorTest, FromEntriesMergesAndDropsZeros) {
  const SparseVector v =
      SparseVector::FromEntries(8, {{3, 1.0}, {1, 2.0}, {3, 2.0}, {5, 0.0}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.entries()[0], (SparseVector::Entry{1, 2.0}));
  EXPECT_EQ(v.entries()[1], (SparseVector::Entry{3, 3.0}));
  EXPECT_EQ(v.Get(3), 3.0);
  EXPECT_EQ(v.Get(4), 0.0);
  EXPECT_DOUBLE_EQ(v.Norm(), std::sqrt(13.0));
  const std::vector<double> dense = {0, 1, 0, 10, 0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(v.Dot(dense), 32.0);
  EXPECT_THROW(SparseVector::FromEntries(8, {{8, 1.0}}), IndexError);
}

TEST(FeatureConfigTest, ValidateAndJson) {
  FeatureConfig config;
  config.hash_dimension = 1000;
  EXPECT_THROW(config.Validate(), ConfigError);
  config.hash_dimension = 1024;
  config.char_ngram_min = 4;
  config.char_ngram_max = 3;
  EXPECT_THROW(config.Validate(), ConfigError);
  config.char_ngram_max = 6;
  EXPECT_EQ(FeatureConfig::FromJson(config.ToJson()), config);
  EXPECT_THROW(FeatureConfig::FromJson(Json::parse(R"({"window": -1})")),
               ConfigError);
  EXPECT_THROW(FeatureConfig::FromJson(Json::parse(R"({"window": "x"})")),
               ConfigError);
}

}  // namespace
}  // namespace idner
