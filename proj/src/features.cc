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

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "idner/errors.h"
#include "idner/unicode.h"

namespace idner {

namespace {

constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

bool IsPowerOfTwo(std::uint32_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::string Word(const Token& token, const FeatureConfig& config) {
  return config.lowercase ? FoldCase(token.surface) : token.surface;
}

// First or last `n` code points of `cps`, re-encoded.
std::string Affix(const std::vector<DecodedCodePoint>& cps, std::size_t n,
                  bool prefix) {
  std::string out;
  const std::size_t begin = prefix ? 0 : cps.size() - n;
  for (std::size_t i = begin; i < begin + n; ++i) {
    AppendUtf8(cps[i].value, out);
  }
  return out;
}

}  // namespace

SparseVector SparseVector::FromEntries(std::uint32_t dimension,
                                       std::vector<Entry> entries) {
  SparseVector v(dimension);
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (const Entry& e : entries) {
    if (e.index >= dimension) {
      throw IndexError("feature index " + std::to_string(e.index) +
                       " outside dimension " + std::to_string(dimension));
    }
    if (!v.entries_.empty() && v.entries_.back().index == e.index) {
      v.entries_.back().value += e.value;
    } else {
      v.entries_.push_back(e);
    }
  }
  std::erase_if(v.entries_, [](const Entry& e) { return e.value == 0.0; });
  return v;
}

double SparseVector::Get(std::uint32_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::uint32_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->value : 0.0;
}

double SparseVector::Norm() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.value * e.value;
  return std::sqrt(sum);
}

double SparseVector::Dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += dense[e.index] * e.value;
  return sum;
}

void SparseVector::Scale(double factor) {
  for (Entry& e : entries_) e.value *= factor;
  std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
}

void FeatureConfig::Validate() const {
  if (!IsPowerOfTwo(hash_dimension)) {
    throw ConfigError("hash_dimension must be a power of two, got " +
                      std::to_string(hash_dimension));
  }
  if (window < 0) throw ConfigError("window must be >= 0");
  if (char_ngram_min < 1 || char_ngram_max < char_ngram_min) {
    throw ConfigError("char n-gram range must satisfy 1 <= min <= max");
  }
}

Json FeatureConfig::ToJson() const {
  Json out = Json::object();
  out["hash_dimension"] = hash_dimension;
  out["window"] = window;
  out["lowercase"] = lowercase;
  out["char_ngram_min"] = char_ngram_min;
  out["char_ngram_max"] = char_ngram_max;
  return out;
}

FeatureConfig FeatureConfig::FromJson(const Json& value) {
  FeatureConfig config;
  if (!value.is_object()) throw ConfigError("feature config must be an object");
  try {
    config.hash_dimension =
        value.value("hash_dimension", config.hash_dimension);
    config.window = value.value("window", config.window);
    config.lowercase = value.value("lowercase", config.lowercase);
    config.char_ngram_min = value.value("char_ngram_min", config.char_ngram_min);
    config.char_ngram_max = value.value("char_ngram_max", config.char_ngram_max);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("feature config: ") + e.what());
  }
  config.Validate();
  return config;
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = kFnvOffsetBasis;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= kFnvPrime;
  }
  return hash;
}

std::uint32_t HashFeature(std::string_view name, std::uint32_t dimension) {
  return static_cast<std::uint32_t>(Fnv1a64(name) & (dimension - 1));
}

std::string WordShape(std::string_view word) {
  std::string shape;
  char32_t last = 0;
  bool have_last = false;
  for (const auto& cp : DecodeUtf8(word)) {
    char32_t cls;
    if (u_isupper(cp.value) || u_istitle(cp.value)) {
      cls = U'X';
    } else if (u_isdigit(cp.value)) {
      cls = U'9';
    } else if (u_isalpha(cp.value)) {
      cls = U'x';
    } else {
      cls = cp.value;
    }
    if (have_last && cls == last) continue;
    AppendUtf8(cls, shape);
    last = cls;
    have_last = true;
  }
  return shape;
}

std::vector<std::string> TokenFeatureNames(const TokenizedText& doc,
                                           std::size_t position,
                                           const FeatureConfig& config) {
  if (position >= doc.size()) {
    throw IndexError("token position " + std::to_string(position) +
                     " outside document of " + std::to_string(doc.size()) +
                     " tokens");
  }
  const Token& token = doc.token(position);
  const std::string word = Word(token, config);
  std::vector<std::string> names;
  names.reserve(16 + 2 * static_cast<std::size_t>(config.window));
  names.push_back("bias");
  names.push_back("w=" + word);
  names.push_back("shape=" + WordShape(token.surface));

  const auto cps = DecodeUtf8(word);
  for (std::size_t n = 1; n <= 3 && n <= cps.size(); ++n) {
    names.push_back("p" + std::to_string(n) + "=" + Affix(cps, n, true));
    names.push_back("s" + std::to_string(n) + "=" + Affix(cps, n, false));
  }

  const auto pos = static_cast<std::int64_t>(position);
  const auto size = static_cast<std::int64_t>(doc.size());
  for (std::int64_t d = -config.window; d <= config.window; ++d) {
    if (d == 0 || pos + d < 0 || pos + d >= size) continue;
    const std::string offset = d < 0 ? std::to_string(d)
                                     : "+" + std::to_string(d);
    names.push_back("w[" + offset + "]=" +
                    Word(doc.token(static_cast<std::size_t>(pos + d)), config));
  }
  if (position == 0) names.push_back("BOS");
  if (position + 1 == doc.size()) names.push_back("EOS");
  return names;
}

SparseVector TokenFeatures(const TokenizedText& doc, std::size_t position,
                           const FeatureConfig& config) {
  std::vector<SparseVector::Entry> entries;
  for (const std::string& name : TokenFeatureNames(doc, position, config)) {
    entries.push_back({HashFeature(name, config.hash_dimension), 1.0});
  }
  return SparseVector::FromEntries(config.hash_dimension, std::move(entries));
}

std::vector<SparseVector> SequenceFeatures(const TokenizedText& doc,
                                           const FeatureConfig& config) {
  std::vector<SparseVector> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(TokenFeatures(doc, i, config));
  }
  return out;
}

std::vector<std::pair<std::string, int>> TextFeatureCounts(
    std::string_view text, const FeatureConfig& config) {
  const TokenizedText doc = Tokenize(text);
  std::map<std::string, int> counts;
  std::vector<std::string> words;
  words.reserve(doc.size());
  for (const Token& t : doc.tokens()) {
    words.push_back(config.lowercase ? FoldCase(t.surface) : t.surface);
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    ++counts["u=" + words[i]];
    if (i + 1 < words.size()) ++counts["b=" + words[i] + " " + words[i + 1]];

    const auto cps = DecodeUtf8("<" + words[i] + ">");
    for (int n = config.char_ngram_min; n <= config.char_ngram_max; ++n) {
      const auto len = static_cast<std::size_t>(n);
      for (std::size_t s = 0; s + len <= cps.size(); ++s) {
        std::string gram = "c=";
        for (std::size_t k = s; k < s + len; ++k) AppendUtf8(cps[k].value, gram);
        ++counts[gram];
      }
    }
  }
  return {counts.begin(), counts.end()};
}

SparseVector TextFeatures(std::string_view text, const FeatureConfig& config) {
  std::vector<SparseVector::Entry> entries;
  for (const auto& [name, count] : TextFeatureCounts(text, config)) {
    entries.push_back({HashFeature(name, config.hash_dimension),
                       static_cast<double>(count)});
  }
  SparseVector v =
      SparseVector::FromEntries(config.hash_dimension, std::move(entries));
  const double norm = v.Norm();
  if (norm > 0.0) v.Scale(1.0 / norm);
  return v;
}

}  // namespace idner
