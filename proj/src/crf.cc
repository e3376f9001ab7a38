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

#include "idner/crf.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idner/errors.h"

namespace idner {

namespace {

double LogSumExp(std::span<const double> values) {
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) max = std::max(max, v);
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

void RequireNonEmpty(const FeatureSequence& features) {
  if (features.empty()) {
    throw EmptyDocumentError("CRF inference needs at least one token");
  }
}

void RequireDimension(const CrfModel& model, const FeatureSequence& features) {
  for (const SparseVector& f : features) {
    if (f.dimension() != model.dimension()) {
      throw DimensionMismatchError(
          "feature dimension " + std::to_string(f.dimension()) +
          " does not match model dimension " +
          std::to_string(model.dimension()));
    }
  }
}

// Forward and backward tables, both n x K in log space.
struct ForwardBackward {
  std::vector<double> emissions;
  std::vector<double> alpha;
  std::vector<double> beta;
  double log_z = 0.0;
};

ForwardBackward RunForwardBackward(const CrfModel& model,
                                   const FeatureSequence& features,
                                   bool with_beta) {
  RequireNonEmpty(features);
  const std::size_t n = features.size();
  const std::size_t k = model.num_tags();
  ForwardBackward fb;
  fb.emissions = EmissionScores(model, features);
  const auto emit = [&](std::size_t t, std::size_t y) {
    return fb.emissions[t * k + y];
  };

  fb.alpha.assign(n * k, 0.0);
  std::vector<double> scratch(k);
  for (std::size_t y = 0; y < k; ++y) {
    fb.alpha[y] = model.transition(model.start_state(), y) + emit(0, y);
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t p = 0; p < k; ++p) {
        scratch[p] = fb.alpha[(t - 1) * k + p] + model.transition(p, y);
      }
      fb.alpha[t * k + y] = LogSumExp(scratch) + emit(t, y);
    }
  }
  for (std::size_t y = 0; y < k; ++y) {
    scratch[y] = fb.alpha[(n - 1) * k + y] +
                 model.transition(y, model.stop_state());
  }
  fb.log_z = LogSumExp(scratch);

  if (with_beta) {
    fb.beta.assign(n * k, 0.0);
    for (std::size_t y = 0; y < k; ++y) {
      fb.beta[(n - 1) * k + y] = model.transition(y, model.stop_state());
    }
    for (std::size_t t = n - 1; t-- > 0;) {
      for (std::size_t y = 0; y < k; ++y) {
        for (std::size_t next = 0; next < k; ++next) {
          scratch[next] = model.transition(y, next) + emit(t + 1, next) +
                          fb.beta[(t + 1) * k + next];
        }
        fb.beta[t * k + y] = LogSumExp(scratch);
      }
    }
  }
  return fb;
}

}  // namespace

CrfModel::CrfModel(std::vector<BioTag> tag_set, FeatureConfig config)
    : tag_set_(std::move(tag_set)), config_(config) {
  config_.Validate();
  if (tag_set_.empty()) throw ConfigError("CRF tag set is empty");
  for (std::size_t i = 0; i < tag_set_.size(); ++i) {
    for (std::size_t j = i + 1; j < tag_set_.size(); ++j) {
      if (tag_set_[i] == tag_set_[j]) {
        throw ConfigError("duplicate tag " + tag_set_[i].ToString());
      }
    }
  }
  params_.assign(num_tags() * dimension() + num_states() * num_states(), 0.0);
}

std::optional<std::size_t> CrfModel::TagIndex(const BioTag& tag) const {
  auto it = std::find(tag_set_.begin(), tag_set_.end(), tag);
  if (it == tag_set_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tag_set_.begin());
}

std::vector<std::size_t> CrfModel::TagIndices(
    std::span<const BioTag> tags) const {
  std::vector<std::size_t> out;
  out.reserve(tags.size());
  for (const BioTag& tag : tags) {
    auto index = TagIndex(tag);
    if (!index) {
      throw ModelAlphabetError("tag " + tag.ToString() +
                               " is not in the model's tag set");
    }
    out.push_back(*index);
  }
  return out;
}

std::vector<BioTag> CrfModel::Tag(const TokenizedText& doc) const {
  if (doc.empty()) return {};
  return CrfViterbi(*this, doc).tags;
}

std::vector<double> EmissionScores(const CrfModel& model,
                                   const FeatureSequence& features) {
  RequireDimension(model, features);
  const std::size_t k = model.num_tags();
  const std::span<const double> params = model.parameters();
  std::vector<double> scores(features.size() * k, 0.0);
  for (std::size_t t = 0; t < features.size(); ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      scores[t * k + y] = features[t].Dot(
          params.subspan(model.emission_offset(y, 0), model.dimension()));
    }
  }
  return scores;
}

double CrfScorePath(const CrfModel& model, const FeatureSequence& features,
                    std::span<const std::size_t> tags) {
  if (tags.size() != features.size()) {
    throw LengthMismatchError("path has " + std::to_string(tags.size()) +
                              " tags for " + std::to_string(features.size()) +
                              " tokens");
  }
  RequireDimension(model, features);
  const std::span<const double> params = model.parameters();
  double score = 0.0;
  std::size_t prev = model.start_state();
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] >= model.num_tags()) throw IndexError("tag index out of range");
    score += features[t].Dot(
        params.subspan(model.emission_offset(tags[t], 0), model.dimension()));
    score += model.transition(prev, tags[t]);
    prev = tags[t];
  }
  score += model.transition(prev, model.stop_state());
  return score;
}

double CrfScorePath(const CrfModel& model, const TokenizedText& doc,
                    std::span<const BioTag> tags) {
  if (tags.size() != doc.size()) {
    throw LengthMismatchError("path has " + std::to_string(tags.size()) +
                              " tags for " + std::to_string(doc.size()) +
                              " tokens");
  }
  const auto indices = model.TagIndices(tags);
  return CrfScorePath(model, SequenceFeatures(doc, model.feature_config()),
                      indices);
}

double CrfLogPartition(const CrfModel& model, const FeatureSequence& features) {
  return RunForwardBackward(model, features, /*with_beta=*/false).log_z;
}

double CrfLogPartition(const CrfModel& model, const TokenizedText& doc) {
  return CrfLogPartition(model, SequenceFeatures(doc, model.feature_config()));
}

ViterbiPath CrfViterbi(const CrfModel& model, const FeatureSequence& features) {
  RequireNonEmpty(features);
  const std::size_t n = features.size();
  const std::size_t k = model.num_tags();
  const std::vector<double> emit = EmissionScores(model, features);

  std::vector<double> delta(n * k);
  std::vector<std::size_t> back(n * k, 0);
  for (std::size_t y = 0; y < k; ++y) {
    delta[y] = model.transition(model.start_state(), y) + emit[y];
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      std::size_t best = 0;
      double best_score = delta[(t - 1) * k] + model.transition(0, y);
      for (std::size_t p = 1; p < k; ++p) {
        const double s = delta[(t - 1) * k + p] + model.transition(p, y);
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      delta[t * k + y] = best_score + emit[t * k + y];
      back[t * k + y] = best;
    }
  }
  std::size_t last = 0;
  double last_score = delta[(n - 1) * k] + model.transition(0, model.stop_state());
  for (std::size_t y = 1; y < k; ++y) {
    const double s = delta[(n - 1) * k + y] +
                     model.transition(y, model.stop_state());
    if (s > last_score) {
      last_score = s;
      last = y;
    }
  }

  ViterbiPath path;
  path.tags.assign(n, 0);
  path.tags[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) {
    path.tags[t - 1] = back[t * k + path.tags[t]];
  }
  path.score = CrfScorePath(model, features, path.tags);
  return path;
}

ViterbiResult CrfViterbi(const CrfModel& model, const TokenizedText& doc) {
  if (doc.empty()) {
    throw EmptyDocumentError("CRF inference needs at least one token");
  }
  ViterbiPath path =
      CrfViterbi(model, SequenceFeatures(doc, model.feature_config()));
  ViterbiResult result;
  result.score = path.score;
  for (std::size_t y : path.tags) result.tags.push_back(model.tag_set()[y]);
  return result;
}

std::vector<std::vector<double>> CrfMarginals(const CrfModel& model,
                                              const FeatureSequence& features) {
  const ForwardBackward fb = RunForwardBackward(model, features, true);
  const std::size_t n = features.size();
  const std::size_t k = model.num_tags();
  std::vector<std::vector<double>> out(n, std::vector<double>(k));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      out[t][y] = std::exp(fb.alpha[t * k + y] + fb.beta[t * k + y] - fb.log_z);
    }
  }
  return out;
}

std::vector<std::vector<double>> CrfMarginals(const CrfModel& model,
                                              const TokenizedText& doc) {
  return CrfMarginals(model, SequenceFeatures(doc, model.feature_config()));
}

double AccumulateCrfNllGradient(const CrfModel& model,
                                const FeatureSequence& features,
                                std::span<const std::size_t> gold,
                                double scale, std::span<double> gradient) {
  if (gold.size() != features.size()) {
    throw LengthMismatchError("gold path has " + std::to_string(gold.size()) +
                              " tags for " + std::to_string(features.size()) +
                              " tokens");
  }
  const ForwardBackward fb = RunForwardBackward(model, features, true);
  const std::size_t n = features.size();
  const std::size_t k = model.num_tags();
  const std::size_t start = model.start_state();
  const std::size_t stop = model.stop_state();

  // Observed counts.
  std::size_t prev = start;
  for (std::size_t t = 0; t < n; ++t) {
    for (const auto& e : features[t].entries()) {
      gradient[model.emission_offset(gold[t], e.index)] -= scale * e.value;
    }
    gradient[model.transition_offset(prev, gold[t])] -= scale;
    prev = gold[t];
  }
  gradient[model.transition_offset(prev, stop)] -= scale;

  // Expected counts.
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      const double p =
          std::exp(fb.alpha[t * k + y] + fb.beta[t * k + y] - fb.log_z);
      if (p == 0.0) continue;
      for (const auto& e : features[t].entries()) {
        gradient[model.emission_offset(y, e.index)] += scale * p * e.value;
      }
      if (t == 0) gradient[model.transition_offset(start, y)] += scale * p;
      if (t + 1 == n) gradient[model.transition_offset(y, stop)] += scale * p;
    }
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t y = 0; y < k; ++y) {
        const double joint =
            std::exp(fb.alpha[(t - 1) * k + p] + model.transition(p, y) +
                     fb.emissions[t * k + y] + fb.beta[t * k + y] - fb.log_z);
        gradient[model.transition_offset(p, y)] += scale * joint;
      }
    }
  }

  return fb.log_z - CrfScorePath(model, features, gold);
}

LossAndGradient CrfNllAndGrad(const CrfModel& model, const TokenizedText& doc,
                              std::span<const BioTag> gold, double l2) {
  if (gold.size() != doc.size()) {
    throw LengthMismatchError("gold path has " + std::to_string(gold.size()) +
                              " tags for " + std::to_string(doc.size()) +
                              " tokens");
  }
  const auto indices = model.TagIndices(gold);
  const FeatureSequence features =
      SequenceFeatures(doc, model.feature_config());
  LossAndGradient out;
  out.gradient.assign(model.parameters().size(), 0.0);
  out.loss =
      AccumulateCrfNllGradient(model, features, indices, 1.0, out.gradient);
  const std::span<const double> w = model.parameters();
  out.loss += 0.5 * l2 * SquaredNorm(w);
  for (std::size_t i = 0; i < w.size(); ++i) out.gradient[i] += l2 * w[i];
  return out;
}

double SquaredNorm(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

}  // namespace idner
