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

// Template-based synthetic corpora, so the whole pipeline runs without
// external data.

#ifndef IDNER_SYNTH_H_
#define IDNER_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "idner/alignment.h"
#include "idner/corpus.h"
#include "idner/text.h"

namespace idner {

struct Lexicon {
  // Indexed by Category.
  std::array<std::vector<std::string>, kNumCategories> words;

  const std::vector<std::string>& operator[](Category c) const {
    return words[static_cast<std::size_t>(c)];
  }

  // Frequent span words for each category.
  static const Lexicon& Default();
  // {"religion": [...], "ethnicity": [...], ...}. Every category needs at
  // least one word. Throws ParseError.
  static Lexicon FromJson(const Json& value);
  Json ToJson() const;
};

struct SyntheticCorpus {
  std::vector<LabeledSentence> sentences;
  std::vector<Document> gold;  // parallel to `sentences`
};

// Deterministic in (lexicon, size, seed). Sentences cycle through the four
// categories; some carry a second mention and some are neutral with no
// labels. Throws ConfigError for size 0.
SyntheticCorpus GenerateSyntheticCorpus(const Lexicon& lexicon,
                                        std::size_t size, std::uint64_t seed);

// Untyped mention corpus drawn from a separate stream for training the
// mention tagger.
std::vector<Document> GenerateMentionCorpus(const Lexicon& lexicon,
                                            std::size_t size,
                                            std::uint64_t seed);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

// 80/10/10 by position; every part non-empty when n >= 3.
SplitSizes SplitCounts(std::size_t n);

// Writes sentences.{train,validation,test}.jsonl,
// spans.{train,validation,test}.jsonl and mentions.{train,validation}.jsonl
// under `dir`.
void WriteSyntheticDataset(const std::filesystem::path& dir,
                           const Lexicon& lexicon, std::size_t size,
                           std::uint64_t seed);

}  // namespace idner

#endif  // IDNER_SYNTH_H_
