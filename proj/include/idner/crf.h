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

// Linear-chain CRF over hashed token features.
//
// A path y_0..y_{n-1} scores
//
//   sum_t W[y_t] . f_t + T[START][y_0] + sum_t T[y_{t-1}][y_t]
//                      + T[y_{n-1}][STOP]
//
// where START and STOP are two virtual states appended after the real tags,
// so the transition matrix is (K + 2) x (K + 2). All parameters live in one
// contiguous buffer: the K x D emission block first, then the transitions.

#ifndef IDNER_CRF_H_
#define IDNER_CRF_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "idner/features.h"
#include "idner/text.h"

namespace idner {

// Anything that maps a tokenized text to one tag per token.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual const std::vector<BioTag>& tag_set() const = 0;
  virtual std::vector<BioTag> Tag(const TokenizedText& doc) const = 0;
};

using FeatureSequence = std::vector<SparseVector>;

class CrfModel final : public Tagger {
 public:
  // Zero-initialised weights. Throws ConfigError for an empty or duplicated
  // tag set or an invalid feature config.
  CrfModel(std::vector<BioTag> tag_set, FeatureConfig config);

  const std::vector<BioTag>& tag_set() const override { return tag_set_; }
  const FeatureConfig& feature_config() const { return config_; }

  std::size_t num_tags() const { return tag_set_.size(); }
  std::size_t num_states() const { return tag_set_.size() + 2; }
  std::size_t start_state() const { return tag_set_.size(); }
  std::size_t stop_state() const { return tag_set_.size() + 1; }
  std::uint32_t dimension() const { return config_.hash_dimension; }

  std::optional<std::size_t> TagIndex(const BioTag& tag) const;
  // Throws ModelAlphabetError for tags outside the tag set.
  std::vector<std::size_t> TagIndices(std::span<const BioTag> tags) const;

  std::size_t emission_offset(std::size_t tag, std::uint32_t feature) const {
    return tag * dimension() + feature;
  }
  std::size_t transition_offset(std::size_t from, std::size_t to) const {
    return num_tags() * dimension() + from * num_states() + to;
  }

  double emission(std::size_t tag, std::uint32_t feature) const {
    return params_[emission_offset(tag, feature)];
  }
  void set_emission(std::size_t tag, std::uint32_t feature, double w) {
    params_[emission_offset(tag, feature)] = w;
  }
  double transition(std::size_t from, std::size_t to) const {
    return params_[transition_offset(from, to)];
  }
  void set_transition(std::size_t from, std::size_t to, double w) {
    params_[transition_offset(from, to)] = w;
  }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Viterbi decoding; an empty document yields no tags.
  std::vector<BioTag> Tag(const TokenizedText& doc) const override;

 private:
  std::vector<BioTag> tag_set_;
  FeatureConfig config_;
  std::vector<double> params_;
};

// Row-major n x K emission scores.
std::vector<double> EmissionScores(const CrfModel& model,
                                   const FeatureSequence& features);

double CrfScorePath(const CrfModel& model, const FeatureSequence& features,
                    std::span<const std::size_t> tags);
// Throws LengthMismatchError, ModelAlphabetError.
double CrfScorePath(const CrfModel& model, const TokenizedText& doc,
                    std::span<const BioTag> tags);

// Forward algorithm in log space. Throws EmptyDocumentError.
double CrfLogPartition(const CrfModel& model, const FeatureSequence& features);
double CrfLogPartition(const CrfModel& model, const TokenizedText& doc);

struct ViterbiPath {
  std::vector<std::size_t> tags;
  double score = 0.0;
};

struct ViterbiResult {
  std::vector<BioTag> tags;
  double score = 0.0;
};

// Ties go to the lowest tag index. The score is the path score of the
// returned sequence. Throws EmptyDocumentError.
ViterbiPath CrfViterbi(const CrfModel& model, const FeatureSequence& features);
ViterbiResult CrfViterbi(const CrfModel& model, const TokenizedText& doc);

// Forward-backward posteriors, one distribution over tags per position.
// Throws EmptyDocumentError.
std::vector<std::vector<double>> CrfMarginals(const CrfModel& model,
                                              const FeatureSequence& features);
std::vector<std::vector<double>> CrfMarginals(const CrfModel& model,
                                              const TokenizedText& doc);

// Adds scale * d(-log p(gold))/dw into `gradient` (sized like the model's
// parameters) and returns -log p(gold). No regularisation.
double AccumulateCrfNllGradient(const CrfModel& model,
                                const FeatureSequence& features,
                                std::span<const std::size_t> gold,
                                double scale, std::span<double> gradient);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

// loss = -score(gold) + log Z + (l2 / 2) |w|^2, with its exact gradient.
LossAndGradient CrfNllAndGrad(const CrfModel& model, const TokenizedText& doc,
                              std::span<const BioTag> gold, double l2);

double SquaredNorm(std::span<const double> values);

}  // namespace idner

#endif  // IDNER_CRF_H_
