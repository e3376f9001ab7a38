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

// Hashed sparse features for the tagger (per token) and the target
// classifier (per text).
//
// Feature names are hashed with 64-bit FNV-1a over their UTF-8 bytes
// (offset basis 0xcbf29ce484222325, prime 0x100000001b3) and masked to the
// configured power-of-two dimension. Distinct names may collide; colliding
// features simply share a weight.

#ifndef IDNER_FEATURES_H_
#define IDNER_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idner/corpus.h"
#include "idner/text.h"

namespace idner {

class SparseVector {
 public:
  struct Entry {
    std::uint32_t index;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::uint32_t dimension) : dimension_(dimension) {}

  // Sums duplicate indices and drops zeros. Throws IndexError for indices
  // >= dimension.
  static SparseVector FromEntries(std::uint32_t dimension,
                                  std::vector<Entry> entries);

  std::uint32_t dimension() const { return dimension_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double Get(std::uint32_t index) const;
  double Norm() const;
  // Dot product against a dense row of length dimension().
  double Dot(std::span<const double> dense) const;
  void Scale(double factor);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::uint32_t dimension_ = 0;
  std::vector<Entry> entries_;  // sorted by index, no zeros
};

struct FeatureConfig {
  std::uint32_t hash_dimension = 1u << 18;
  int window = 2;
  bool lowercase = true;
  int char_ngram_min = 3;
  int char_ngram_max = 5;

  // Throws ConfigError.
  void Validate() const;

  Json ToJson() const;
  static FeatureConfig FromJson(const Json& value);

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

std::uint64_t Fnv1a64(std::string_view bytes);

// Fnv1a64(name) & (dimension - 1). `dimension` must be a power of two.
std::uint32_t HashFeature(std::string_view name, std::uint32_t dimension);

// Character classes X (upper), x (lower or uncased letter), 9 (digit); any
// other code point stands for itself. Runs of one class are compressed, so
// "Hamas" -> "Xx" and "non-white" -> "x-x".
std::string WordShape(std::string_view word);

// Feature names fired for one token:
//   bias, w=<word>, shape=<shape>, p1..p3=<prefix>, s1..s3=<suffix>,
//   w[-k]=<word>, w[+k]=<word> for neighbours within the window,
//   BOS on the first token and EOS on the last.
// Throws IndexError when position >= doc.size().
std::vector<std::string> TokenFeatureNames(const TokenizedText& doc,
                                           std::size_t position,
                                           const FeatureConfig& config);

SparseVector TokenFeatures(const TokenizedText& doc, std::size_t position,
                           const FeatureConfig& config);

// TokenFeatures for every position.
std::vector<SparseVector> SequenceFeatures(const TokenizedText& doc,
                                           const FeatureConfig& config);

// Bag of u=<word>, b=<word> <word> and c=<char n-gram> counts, where the
// n-grams are taken over each token wrapped as "<token>". L2-normalised.
std::vector<std::pair<std::string, int>> TextFeatureCounts(
    std::string_view text, const FeatureConfig& config);

SparseVector TextFeatures(std::string_view text, const FeatureConfig& config);

}  // namespace idner

#endif  // IDNER_FEATURES_H_
