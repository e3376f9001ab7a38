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

#include "idner/classifier.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "idner/errors.h"

namespace idner {

namespace {

constexpr std::array<std::string_view, kNumTargetClasses> kClassNames = {
    "religion", "ethnicity", "sexual_orientation", "gender", "none"};

}  // namespace

std::vector<TargetClass> AllTargetClasses() {
  return {TargetClass::kReligion, TargetClass::kEthnicity,
          TargetClass::kSexualOrientation, TargetClass::kGender,
          TargetClass::kNone};
}

std::string_view TargetClassName(TargetClass c) {
  return kClassNames[static_cast<std::size_t>(c)];
}

std::optional<TargetClass> TargetClassFromName(std::string_view name) {
  for (std::size_t i = 0; i < kNumTargetClasses; ++i) {
    if (kClassNames[i] == name) return static_cast<TargetClass>(i);
  }
  return std::nullopt;
}

TargetClass ToTargetClass(Category category) {
  return static_cast<TargetClass>(static_cast<std::uint8_t>(category));
}

std::optional<Category> ToCategory(TargetClass c) {
  if (c == TargetClass::kNone) return std::nullopt;
  return static_cast<Category>(static_cast<std::uint8_t>(c));
}

ClassifierModel::ClassifierModel(std::vector<TargetClass> classes,
                                 FeatureConfig config)
    : classes_(std::move(classes)), config_(config) {
  config_.Validate();
  if (classes_.empty()) throw ConfigError("classifier has no classes");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    for (std::size_t j = i + 1; j < classes_.size(); ++j) {
      if (classes_[i] == classes_[j]) {
        throw ConfigError("duplicate class " +
                          std::string(TargetClassName(classes_[i])));
      }
    }
  }
  params_.assign(num_classes() * dimension() + num_classes(), 0.0);
}

std::optional<std::size_t> ClassifierModel::ClassIndex(TargetClass c) const {
  auto it = std::find(classes_.begin(), classes_.end(), c);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

std::vector<double> ClassifierModel::Scores(
    const SparseVector& features) const {
  if (features.dimension() != dimension()) {
    throw DimensionMismatchError(
        "feature dimension " + std::to_string(features.dimension()) +
        " does not match classifier dimension " + std::to_string(dimension()));
  }
  const std::span<const double> params = params_;
  std::vector<double> scores(num_classes());
  for (std::size_t c = 0; c < num_classes(); ++c) {
    scores[c] =
        features.Dot(params.subspan(weight_offset(c, 0), dimension())) +
        bias(c);
  }
  return scores;
}

std::vector<double> ClassifierModel::PredictText(std::string_view text) const {
  return ClfPredict(*this, TextFeatures(text, config_));
}

std::vector<double> Softmax(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const double max = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> ClfPredict(const ClassifierModel& model,
                               const SparseVector& features) {
  return Softmax(model.Scores(features));
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double AccumulateClfGradient(const ClassifierModel& model,
                             const ClassExample& example, double scale,
                             std::span<double> gradient) {
  if (example.label >= model.num_classes()) {
    throw IndexError("class label out of range");
  }
  const std::vector<double> probs = ClfPredict(model, example.features);
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    const double residual = probs[c] - (c == example.label ? 1.0 : 0.0);
    if (residual == 0.0) continue;
    for (const auto& e : example.features.entries()) {
      gradient[model.weight_offset(c, e.index)] += scale * residual * e.value;
    }
    gradient[model.bias_offset(c)] += scale * residual;
  }
  // -log softmax computed from scores for accuracy at extreme margins.
  const std::vector<double> scores = model.Scores(example.features);
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  return max + std::log(sum) - scores[example.label];
}

LossAndGradient ClfLossAndGrad(const ClassifierModel& model,
                               std::span<const ClassExample> examples,
                               double l2) {
  LossAndGradient out;
  out.gradient.assign(model.parameters().size(), 0.0);
  if (!examples.empty()) {
    const double scale = 1.0 / static_cast<double>(examples.size());
    for (const ClassExample& ex : examples) {
      out.loss += scale * AccumulateClfGradient(model, ex, scale, out.gradient);
    }
  }
  const std::span<const double> w = model.parameters();
  out.loss += 0.5 * l2 * SquaredNorm(w);
  for (std::size_t i = 0; i < w.size(); ++i) out.gradient[i] += l2 * w[i];
  return out;
}

}  // namespace idner
