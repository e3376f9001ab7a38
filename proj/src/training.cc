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

#include "idner/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "idner/errors.h"
#include "idner/rng.h"

namespace idner {

namespace {

// Shared loop. `accumulate(model, i, scale, grad)` adds scale * gradient of
// example i and returns its loss; `heldout_loss(model)` scores a model.
template <typename Model, typename Accumulate, typename HeldoutLoss>
void Descend(Model& model, std::size_t num_examples, Accumulate accumulate,
             HeldoutLoss heldout_loss, const TrainConfig& config,
             TrainingLog* log) {
  TrainingLog local_log;
  TrainingLog& out = log ? *log : local_log;
  out = TrainingLog{};

  std::span<double> w = model.parameters();
  std::vector<double> best(w.begin(), w.end());
  double best_loss = heldout_loss(model);
  out.epochs.push_back(
      {0, std::numeric_limits<double>::quiet_NaN(), best_loss});
  out.best_epoch = 0;
  out.best_validation_loss = best_loss;

  Rng rng(config.seed);
  std::vector<std::size_t> order(num_examples);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(w.size(), 0.0);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  int stale = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    double objective_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t begin = 0; begin < num_examples; begin += batch) {
      const std::size_t end = std::min(begin + batch, num_examples);
      const double scale = 1.0 / static_cast<double>(end - begin);
      std::fill(grad.begin(), grad.end(), 0.0);
      double data_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        data_loss += scale * accumulate(model, order[i], scale, grad);
      }
      objective_sum += data_loss + 0.5 * config.l2 * SquaredNorm(w);
      ++steps;
      const double lr = config.learning_rate;
      for (std::size_t p = 0; p < w.size(); ++p) {
        w[p] -= lr * (grad[p] + config.l2 * w[p]);
      }
    }
    const double train_loss = objective_sum / static_cast<double>(steps);
    if (!std::isfinite(train_loss)) {
      throw Error("training diverged at epoch " + std::to_string(epoch) +
                  "; lower the learning rate");
    }
    const double loss = heldout_loss(model);
    out.epochs.push_back({epoch, train_loss, loss});
    if (loss < best_loss) {
      best_loss = loss;
      best.assign(w.begin(), w.end());
      out.best_epoch = epoch;
      out.best_validation_loss = loss;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  std::copy(best.begin(), best.end(), w.begin());
}

struct EncodedSequence {
  FeatureSequence features;
  std::vector<std::size_t> tags;
};

std::vector<EncodedSequence> EncodeSequences(
    const CrfModel& model, std::span<const TaggedDocument> data) {
  std::vector<EncodedSequence> out;
  out.reserve(data.size());
  for (const TaggedDocument& d : data) {
    if (d.tags.size() != d.doc.size()) {
      throw LengthMismatchError("document has " + std::to_string(d.doc.size()) +
                                " tokens but " + std::to_string(d.tags.size()) +
                                " tags");
    }
    if (d.doc.empty()) continue;
    out.push_back({SequenceFeatures(d.doc, model.feature_config()),
                   model.TagIndices(d.tags)});
  }
  return out;
}

double MeanCrfNll(const CrfModel& model,
                  const std::vector<EncodedSequence>& data) {
  if (data.empty()) return 0.0;
  double sum = 0.0;
  for (const EncodedSequence& s : data) {
    sum += CrfLogPartition(model, s.features) -
           CrfScorePath(model, s.features, s.tags);
  }
  return sum / static_cast<double>(data.size());
}

double CrossEntropy(const ClassifierModel& model, const ClassExample& ex) {
  const std::vector<double> scores = model.Scores(ex.features);
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  return max + std::log(sum) - scores[ex.label];
}

double MeanCrossEntropy(const ClassifierModel& model,
                        const std::vector<ClassExample>& data) {
  if (data.empty()) return 0.0;
  double sum = 0.0;
  for (const ClassExample& ex : data) sum += CrossEntropy(model, ex);
  return sum / static_cast<double>(data.size());
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    throw ConfigError("l2 must be non-negative");
  }
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
}

Json TrainConfig::ToJson() const {
  Json out = Json::object();
  out["learning_rate"] = learning_rate;
  out["l2"] = l2;
  out["epochs"] = epochs;
  out["batch_size"] = batch_size;
  out["seed"] = seed;
  out["patience"] = patience;
  return out;
}

TrainConfig TrainConfig::FromJson(const Json& value) {
  if (!value.is_object()) throw ConfigError("train config must be an object");
  TrainConfig config;
  try {
    config.learning_rate = value.value("learning_rate", config.learning_rate);
    config.l2 = value.value("l2", config.l2);
    config.epochs = value.value("epochs", config.epochs);
    config.batch_size = value.value("batch_size", config.batch_size);
    config.seed = value.value("seed", config.seed);
    config.patience = value.value("patience", config.patience);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
  config.Validate();
  return config;
}

TaggedDocument MakeTaggedDocument(const Document& doc) {
  TaggedDocument out{Tokenize(doc.text), {}};
  out.tags = EncodeBio(out.doc, doc.spans);
  return out;
}

std::vector<BioTag> InferTagSet(std::span<const TaggedDocument> data) {
  bool typed = false;
  bool untyped = false;
  for (const TaggedDocument& d : data) {
    for (const BioTag& t : d.tags) {
      if (t.is_outside()) continue;
      (t.label() ? typed : untyped) = true;
    }
  }
  if (typed && untyped) {
    throw ModelAlphabetError(
        "training data mixes typed and untyped spans; pick one tag alphabet");
  }
  return untyped ? UntypedTagSet() : TypedTagSet();
}

CrfModel CrfTrain(std::span<const TaggedDocument> train,
                  std::span<const TaggedDocument> validation,
                  std::vector<BioTag> tag_set, const FeatureConfig& features,
                  const TrainConfig& config, TrainingLog* log) {
  config.Validate();
  CrfModel model(std::move(tag_set), features);
  const std::vector<EncodedSequence> train_data = EncodeSequences(model, train);
  if (train_data.empty()) {
    throw EmptyDatasetError("no non-empty training documents");
  }
  const std::vector<EncodedSequence> heldout =
      validation.empty() ? std::vector<EncodedSequence>{}
                         : EncodeSequences(model, validation);
  const std::vector<EncodedSequence>& scored =
      heldout.empty() ? train_data : heldout;

  Descend(
      model, train_data.size(),
      [&](const CrfModel& m, std::size_t i, double scale,
          std::span<double> grad) {
        return AccumulateCrfNllGradient(m, train_data[i].features,
                                        train_data[i].tags, scale, grad);
      },
      [&](const CrfModel& m) { return MeanCrfNll(m, scored); }, config, log);
  return model;
}

ClassifierModel ClfTrain(std::span<const TextExample> train,
                         std::span<const TextExample> validation,
                         const FeatureConfig& features,
                         const TrainConfig& config, TrainingLog* log) {
  config.Validate();
  if (train.empty()) throw EmptyDatasetError("no training examples");
  ClassifierModel model(AllTargetClasses(), features);
  auto encode = [&](std::span<const TextExample> data) {
    std::vector<ClassExample> out;
    out.reserve(data.size());
    for (const TextExample& ex : data) {
      out.push_back({TextFeatures(ex.text, features),
                     *model.ClassIndex(ex.label)});
    }
    return out;
  };
  const std::vector<ClassExample> train_data = encode(train);
  const std::vector<ClassExample> heldout = encode(validation);
  const std::vector<ClassExample>& scored =
      heldout.empty() ? train_data : heldout;

  Descend(
      model, train_data.size(),
      [&](const ClassifierModel& m, std::size_t i, double scale,
          std::span<double> grad) {
        return AccumulateClfGradient(m, train_data[i], scale, grad);
      },
      [&](const ClassifierModel& m) { return MeanCrossEntropy(m, scored); },
      config, log);
  return model;
}

}  // namespace idner
