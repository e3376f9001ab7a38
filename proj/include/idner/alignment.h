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

// Dataset alignment: an untyped mention tagger proposes spans in sentences
// that carry only sentence-level target labels; the target classifier types
// each span, and a span is kept only when its predicted category is one of
// the sentence's labels.

#ifndef IDNER_ALIGNMENT_H_
#define IDNER_ALIGNMENT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "idner/classifier.h"
#include "idner/corpus.h"
#include "idner/crf.h"
#include "idner/text.h"

namespace idner {

struct LabeledSentence {
  std::string id;
  std::string text;
  std::vector<Category> labels;  // sorted, unique

  bool HasLabel(Category c) const;
};

// {"id": ..., "text": ..., "labels": ["religion", ...]}
Json LabeledSentenceToJson(const LabeledSentence& sentence);
LabeledSentence LabeledSentenceFromJson(const Json& value);
std::vector<LabeledSentence> ReadSentenceCorpus(
    const std::filesystem::path& path);
void WriteSentenceCorpus(const std::filesystem::path& path,
                         std::span<const LabeledSentence> sentences);

struct SpanProvenance {
  Span tagger_span;  // untyped, as proposed by the tagger
  TargetClass predicted = TargetClass::kNone;
  double probability = 0.0;
  std::vector<Category> sentence_labels;

  friend bool operator==(const SpanProvenance&,
                         const SpanProvenance&) = default;
};

struct AlignedExample {
  std::string id;
  std::string text;
  std::vector<Span> spans;                  // typed, sorted
  std::vector<SpanProvenance> provenance;   // parallel to spans

  friend bool operator==(const AlignedExample&,
                         const AlignedExample&) = default;
};

Json ProvenanceToJson(const SpanProvenance& p);
SpanProvenance ProvenanceFromJson(const Json& value);

struct AlignmentStats {
  std::size_t sentences_in = 0;
  // Sentences without ground-truth labels are not tagged.
  std::size_t sentences_unlabeled = 0;
  std::size_t spans_tagged = 0;
  std::array<std::size_t, kNumTargetClasses> spans_classified_per_class{};
  std::size_t spans_accepted = 0;
  std::size_t spans_rejected_disagreement = 0;
  // Agreeing spans whose probability fell below the configured threshold.
  std::size_t spans_rejected_low_confidence = 0;
  std::size_t sentences_emitted = 0;

  Json ToJson() const;
};

struct AlignmentOptions {
  // Code points of context on each side of the span fed to the classifier.
  std::size_t context_window = 0;
  // Minimum classifier probability for an agreeing span.
  double min_probability = 0.0;
};

struct SpanPrediction {
  TargetClass predicted = TargetClass::kNone;
  double probability = 0.0;
};

// Classifies the span surface plus `context_window` code points on each
// side (clipped to the text). Lowest class index wins ties.
// Throws SpanOutOfBoundsError.
SpanPrediction ClassifySpan(const TargetClassifier& classifier,
                            std::string_view text, const Span& span,
                            std::size_t context_window);

struct AlignmentResult {
  std::vector<AlignedExample> examples;  // input order
  AlignmentStats stats;
};

// Throws ModelAlphabetError unless the tagger uses the untyped tag set and
// the classifier the five-class alphabet.
AlignmentResult AlignCorpus(std::span<const LabeledSentence> sentences,
                            const Tagger& untyped_tagger,
                            const TargetClassifier& classifier,
                            const AlignmentOptions& options = {});

}  // namespace idner

#endif  // IDNER_ALIGNMENT_H_
