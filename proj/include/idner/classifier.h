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

// Multinomial logistic regression predicting which identity group a text
// targets, with an explicit NONE class for texts targeting no listed group.

#ifndef IDNER_CLASSIFIER_H_
#define IDNER_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "idner/crf.h"
#include "idner/features.h"
#include "idner/text.h"

namespace idner {

enum class TargetClass : std::uint8_t {
  kReligion = 0,
  kEthnicity = 1,
  kSexualOrientation = 2,
  kGender = 3,
  kNone = 4,
};

inline constexpr std::size_t kNumTargetClasses = 5;

// Four categories in canonical order, then NONE.
std::vector<TargetClass> AllTargetClasses();

std::string_view TargetClassName(TargetClass c);  // "religion", ..., "none"
std::optional<TargetClass> TargetClassFromName(std::string_view name);
TargetClass ToTargetClass(Category category);
std::optional<Category> ToCategory(TargetClass c);

// Anything producing a class distribution for a piece of text.
class TargetClassifier {
 public:
  virtual ~TargetClassifier() = default;
  virtual const std::vector<TargetClass>& classes() const = 0;
  virtual std::vector<double> PredictText(std::string_view text) const = 0;
};

class ClassifierModel final : public TargetClassifier {
 public:
  // Zero weights and biases. Throws ConfigError.
  ClassifierModel(std::vector<TargetClass> classes, FeatureConfig config);

  const std::vector<TargetClass>& classes() const override { return classes_; }
  const FeatureConfig& feature_config() const { return config_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::uint32_t dimension() const { return config_.hash_dimension; }

  std::optional<std::size_t> ClassIndex(TargetClass c) const;

  std::size_t weight_offset(std::size_t cls, std::uint32_t feature) const {
    return cls * dimension() + feature;
  }
  std::size_t bias_offset(std::size_t cls) const {
    return num_classes() * dimension() + cls;
  }

  double weight(std::size_t cls, std::uint32_t feature) const {
    return params_[weight_offset(cls, feature)];
  }
  void set_weight(std::size_t cls, std::uint32_t feature, double w) {
    params_[weight_offset(cls, feature)] = w;
  }
  double bias(std::size_t cls) const { return params_[bias_offset(cls)]; }
  void set_bias(std::size_t cls, double b) { params_[bias_offset(cls)] = b; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Per-class linear scores. Throws DimensionMismatchError.
  std::vector<double> Scores(const SparseVector& features) const;

  std::vector<double> PredictText(std::string_view text) const override;

 private:
  std::vector<TargetClass> classes_;
  FeatureConfig config_;
  std::vector<double> params_;
};

std::vector<double> Softmax(std::span<const double> scores);

// Softmax of the class scores. Throws DimensionMismatchError.
std::vector<double> ClfPredict(const ClassifierModel& model,
                               const SparseVector& features);

// Index of the largest probability; lowest index wins ties.
std::size_t ArgMax(std::span<const double> values);

struct ClassExample {
  SparseVector features;
  std::size_t label = 0;  // index into the model's classes
};

// Adds scale * d(cross-entropy)/dw into `gradient` and returns the
// cross-entropy of the example.
double AccumulateClfGradient(const ClassifierModel& model,
                             const ClassExample& example, double scale,
                             std::span<double> gradient);

// Mean cross-entropy over `examples` plus (l2 / 2) |w|^2, with gradient.
LossAndGradient ClfLossAndGrad(const ClassifierModel& model,
                               std::span<const ClassExample> examples,
                               double l2);

}  // namespace idner

#endif  // IDNER_CLASSIFIER_H_
