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

// Mini-batch gradient descent for the tagger and the target classifier.
//
// Each step minimises mean(batch loss) + (l2 / 2) |w|^2. Example order is
// reshuffled every epoch from `seed`; the model with the lowest validation
// loss (the untrained model counts as epoch 0) is returned, and training
// stops after `patience` epochs without improvement.

#ifndef IDNER_TRAINING_H_
#define IDNER_TRAINING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idner/classifier.h"
#include "idner/corpus.h"
#include "idner/crf.h"
#include "idner/text.h"

namespace idner {

struct TrainConfig {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 20;
  int batch_size = 8;
  std::uint64_t seed = 42;
  int patience = 3;

  // Throws ConfigError.
  void Validate() const;

  Json ToJson() const;
  static TrainConfig FromJson(const Json& value);
};

struct EpochRecord {
  int epoch = 0;
  // Mean over the epoch's steps of the regularised batch objective,
  // evaluated before each update. NaN for epoch 0.
  double train_loss = 0.0;
  // Mean unregularised loss over the validation set (or the training set
  // when no validation data is given).
  double validation_loss = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_validation_loss = 0.0;
};

struct TaggedDocument {
  TokenizedText doc;
  std::vector<BioTag> tags;
};

// Encodes a span document into tokens and gold tags.
TaggedDocument MakeTaggedDocument(const Document& doc);

// Untyped tag set when every span is untyped, typed when every span carries
// a category. Mixed input raises ModelAlphabetError.
std::vector<BioTag> InferTagSet(std::span<const TaggedDocument> data);

// Documents without tokens are skipped. Throws EmptyDatasetError when no
// trainable document remains, ModelAlphabetError for gold tags outside
// `tag_set`.
CrfModel CrfTrain(std::span<const TaggedDocument> train,
                  std::span<const TaggedDocument> validation,
                  std::vector<BioTag> tag_set, const FeatureConfig& features,
                  const TrainConfig& config, TrainingLog* log = nullptr);

struct TextExample {
  std::string text;
  TargetClass label = TargetClass::kNone;
};

// Trains over the full five-class alphabet. Throws EmptyDatasetError.
ClassifierModel ClfTrain(std::span<const TextExample> train,
                         std::span<const TextExample> validation,
                         const FeatureConfig& features,
                         const TrainConfig& config, TrainingLog* log = nullptr);

}  // namespace idner

#endif  // IDNER_TRAINING_H_
