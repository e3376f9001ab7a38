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

// Entity-level evaluation with exact (start, end, label) matching.

#ifndef IDNER_EVALUATION_H_
#define IDNER_EVALUATION_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "idner/corpus.h"
#include "idner/crf.h"
#include "idner/text.h"

namespace idner {

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// Indexed by SpanLabelIndex(): the four categories, then untyped.
struct MatchCounts {
  std::array<ClassCounts, kNumSpanLabels> per_label{};

  ClassCounts& operator[](const SpanLabel& label) {
    return per_label[SpanLabelIndex(label)];
  }
  const ClassCounts& operator[](const SpanLabel& label) const {
    return per_label[SpanLabelIndex(label)];
  }
  MatchCounts& operator+=(const MatchCounts& other);
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

// Throws OverlapError if either list overlaps internally.
MatchCounts MatchSpans(std::span<const Span> gold, std::span<const Span> pred);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassReport {
  Metrics metrics;
  std::size_t support = 0;    // gold entities
  std::size_t predicted = 0;  // predicted entities
};

struct EvalReport {
  std::array<ClassReport, kNumSpanLabels> per_label{};
  Metrics micro;
  // Averages over labels that occur in gold or predictions.
  Metrics macro;
  Metrics weighted;
  std::size_t total_support = 0;
  MatchCounts counts;
};

// Precision, recall and F1 with 0/0 taken as 0.
Metrics ComputeMetrics(const ClassCounts& counts);
EvalReport ComputeReport(const MatchCounts& counts);

// Tags every document and matches predictions against gold spans.
EvalReport EvaluateCorpus(std::span<const Document> gold, const Tagger& tagger);
// Predictions aligned with gold by document id. Throws ParseError when ids
// or texts disagree.
EvalReport EvaluatePredictions(std::span<const Document> gold,
                               std::span<const Document> predicted);

std::string FormatReport(const EvalReport& report);
Json ReportToJson(const EvalReport& report);

}  // namespace idner

#endif  // IDNER_EVALUATION_H_
