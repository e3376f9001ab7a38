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

#include "idner/cli.h"

#include <signal.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "idner/analytics.h"
#include "idner/classifier.h"
#include "idner/crf.h"
#include "idner/errors.h"
#include "idner/evaluation.h"
#include "idner/model_io.h"
#include "idner/review.h"
#include "idner/synth.h"

namespace idner {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string output;
};

struct TextRecord {
  std::string id;
  std::string text;
};

PipelineConfig LoadConfig(const Globals& g) {
  PipelineConfig config =
      g.config.empty() ? PipelineConfig{} : PipelineConfig::Load(g.config);
  if (g.seed) config.train.seed = *g.seed;
  return config;
}

std::filesystem::path RequireOutput(const Globals& g, std::string_view what) {
  if (g.output.empty()) {
    throw UsageError("--output is required: path of the " + std::string(what));
  }
  return g.output;
}

// Writes to --output when given, otherwise to `out`.
void Emit(const Globals& g, std::string_view data, std::ostream& out) {
  if (g.output.empty()) {
    out << data;
  } else {
    WriteTextFile(g.output, data);
  }
}

std::vector<TextRecord> ReadTextRecords(const std::filesystem::path& path) {
  std::vector<TextRecord> out;
  std::size_t record = 0;
  for (const Json& v : ReadJsonLines(path)) {
    ++record;
    try {
      out.push_back({RequireString(v, "id"), RequireString(v, "text")});
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  return out;
}

void PrintTrainingLog(const TrainingLog& log, std::ostream& out) {
  out << fmt::format("{:>5}  {:>12}  {:>15}\n", "epoch", "train_loss",
                     "validation_loss");
  for (const EpochRecord& e : log.epochs) {
    const std::string train = std::isnan(e.train_loss)
                                  ? std::string("-")
                                  : fmt::format("{:.6f}", e.train_loss);
    out << fmt::format("{:>5}  {:>12}  {:>15.6f}\n", e.epoch, train,
                       e.validation_loss);
  }
  out << fmt::format("best epoch {} (validation loss {:.6f})\n",
                     log.best_epoch, log.best_validation_loss);
}

std::vector<TaggedDocument> ToTagged(std::vector<Document> docs,
                                     bool erase_labels) {
  std::vector<TaggedDocument> out;
  out.reserve(docs.size());
  for (Document& d : docs) {
    if (erase_labels) {
      for (Span& s : d.spans) s.label = std::nullopt;
    }
    out.push_back(MakeTaggedDocument(d));
  }
  return out;
}

// Sentence corpora give one example per label (or a "none" example for
// unlabeled sentences); span corpora give one example per span surface and
// a "none" example for span-free documents.
std::vector<TextExample> ClassifierExamples(const std::filesystem::path& path) {
  const std::vector<Json> records = ReadJsonLines(path);
  std::vector<TextExample> out;
  std::size_t record = 0;
  for (const Json& v : records) {
    ++record;
    try {
      if (v.contains("labels")) {
        const LabeledSentence s = LabeledSentenceFromJson(v);
        if (s.labels.empty()) out.push_back({s.text, TargetClass::kNone});
        for (Category c : s.labels) out.push_back({s.text, ToTargetClass(c)});
      } else {
        const Document d = DocumentFromJson(v);
        if (d.spans.empty()) out.push_back({d.text, TargetClass::kNone});
        const TokenizedText tokens = Tokenize(d.text);
        for (const Span& s : d.spans) {
          if (!s.label) {
            throw ParseError("classifier training needs typed spans");
          }
          out.push_back(
              {tokens.Slice(s.start, s.end), ToTargetClass(*s.label)});
        }
      }
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  return out;
}

std::vector<Document> TagRecords(const CrfModel& model,
                                 std::span<const TextRecord> records) {
  std::vector<Document> out;
  out.reserve(records.size());
  for (const TextRecord& r : records) {
    const TokenizedText doc = Tokenize(r.text);
    out.push_back({r.id, r.text, DecodeBio(doc, model.Tag(doc))});
  }
  return out;
}

std::vector<MentionRecord> LoadMentionRecords(const std::string& mentions,
                                              const std::string& comments,
                                              const std::string& model) {
  if (!mentions.empty()) {
    if (!comments.empty()) {
      throw UsageError("give either --mentions or --comments, not both");
    }
    return ReadMentionRecords(mentions);
  }
  if (comments.empty() || model.empty()) {
    throw UsageError("give --mentions, or --comments together with --model");
  }
  const CrfModel tagger = LoadCrfModel(model);
  std::vector<MentionRecord> out;
  for (const CommentRecord& c : ReadComments(comments)) {
    const TokenizedText doc = Tokenize(c.text);
    out.push_back(
        {c.post_id, c.comment_id, c.text, DecodeBio(doc, tagger.Tag(doc))});
  }
  return out;
}

void ServeUntilSignal(ReviewService& service, const ServiceOptions& options,
                      std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  try {
    const int port = service.Bind();
    service.Start();
    out << fmt::format("review service listening on http://{}:{}\n",
                       options.bind, port)
        << std::flush;
    int received = 0;
    sigwait(&signals, &received);
    service.Stop();
  } catch (...) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw;
  }
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
}

}  // namespace

PipelineConfig PipelineConfig::FromJson(const Json& value) {
  if (!value.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig config;
  try {
    if (auto it = value.find("features"); it != value.end()) {
      config.features = FeatureConfig::FromJson(*it);
    }
    if (auto it = value.find("train"); it != value.end()) {
      config.train = TrainConfig::FromJson(*it);
    }
    if (auto it = value.find("alignment"); it != value.end()) {
      if (!it->is_object()) throw ConfigError("alignment must be an object");
      config.alignment.context_window =
          it->value("context_window", config.alignment.context_window);
      config.alignment.min_probability =
          it->value("min_probability", config.alignment.min_probability);
      config.auto_accept = it->value("auto_accept", config.auto_accept);
      if (!(config.alignment.min_probability >= 0.0 &&
            config.alignment.min_probability <= 1.0)) {
        throw ConfigError("min_probability must lie in [0, 1]");
      }
    }
    if (auto it = value.find("service"); it != value.end()) {
      if (!it->is_object()) throw ConfigError("service must be an object");
      config.service.bind = it->value("bind", config.service.bind);
      config.service.port = it->value("port", config.service.port);
      if (it->contains("ui_dir")) {
        config.service.ui_dir = (*it)["ui_dir"].get<std::string>();
      }
      if (config.service.port < 0 || config.service.port > 65535) {
        throw ConfigError("port must lie in [0, 65535]");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

PipelineConfig PipelineConfig::Load(const std::filesystem::path& path) {
  Json value;
  try {
    value = Json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return FromJson(value);
}

std::string FormatDatasetStats(std::span<const std::vector<Document>> splits,
                               std::span<const std::string> names) {
  std::vector<std::array<std::size_t, kNumSpanLabels>> counts(splits.size());
  std::array<std::size_t, kNumSpanLabels> totals{};
  for (std::size_t i = 0; i < splits.size(); ++i) {
    counts[i] = {};
    for (const Document& d : splits[i]) {
      for (const Span& s : d.spans) {
        ++counts[i][SpanLabelIndex(s.label)];
        ++totals[SpanLabelIndex(s.label)];
      }
    }
  }
  const bool show_untyped = totals[SpanLabelIndex(std::nullopt)] > 0;
  std::vector<std::size_t> columns;
  for (Category c : kAllCategories) columns.push_back(SpanLabelIndex(c));
  if (show_untyped) columns.push_back(SpanLabelIndex(std::nullopt));

  auto title = [](std::size_t index) {
    const SpanLabel label = SpanLabelFromIndex(index);
    return label ? std::string(CategoryTitle(*label)) : std::string("Untyped");
  };
  std::string out = fmt::format("{:<12}", "Split");
  for (std::size_t c : columns) {
    out += fmt::format("{:>{}}", title(c), std::max<std::size_t>(
                                               title(c).size() + 2, 10));
  }
  out += fmt::format("{:>10}\n", "Total");
  auto row = [&](const std::string& name,
                 const std::array<std::size_t, kNumSpanLabels>& values) {
    out += fmt::format("{:<12}", name);
    std::size_t sum = 0;
    for (std::size_t c : columns) {
      out += fmt::format("{:>{}}", values[c],
                         std::max<std::size_t>(title(c).size() + 2, 10));
      sum += values[c];
    }
    out += fmt::format("{:>10}\n", sum);
  };
  for (std::size_t i = 0; i < splits.size(); ++i) row(names[i], counts[i]);
  row("Total", totals);
  return out;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Identity-group named entity recognition toolkit", "idner"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides the config)");
  app.add_option("--config", g.config, "Pipeline config JSON")
      ->check(CLI::ExistingFile);
  app.add_option("--output", g.output, "Output path");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::size_t synth_size = 0;
  std::string lexicon_path;
  synth->add_option("--size", synth_size, "Number of labelled sentences")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--lexicon", lexicon_path, "Lexicon JSON")
      ->check(CLI::ExistingFile);

  // train-tagger
  auto* train_tagger =
      app.add_subcommand("train-tagger", "Train a CRF span tagger");
  std::string tagger_train, tagger_validation;
  bool untyped = false;
  train_tagger->add_option("--train", tagger_train, "Span corpus")
      ->required()
      ->check(CLI::ExistingFile);
  train_tagger->add_option("--validation", tagger_validation, "Span corpus")
      ->check(CLI::ExistingFile);
  train_tagger->add_flag("--untyped", untyped,
                         "Drop span labels and train a mention tagger");

  // train-classifier
  auto* train_classifier = app.add_subcommand(
      "train-classifier", "Train the identity-target classifier");
  std::string clf_train, clf_validation;
  train_classifier
      ->add_option("--train", clf_train, "Sentence or span corpus")
      ->required()
      ->check(CLI::ExistingFile);
  train_classifier
      ->add_option("--validation", clf_validation, "Sentence or span corpus")
      ->check(CLI::ExistingFile);

  // tag
  auto* tag = app.add_subcommand("tag", "Tag documents with a CRF model");
  std::string tag_model, tag_input;
  tag->add_option("--model", tag_model)->required()->check(CLI::ExistingFile);
  tag->add_option("--input", tag_input, "JSONL with id and text")
      ->required()
      ->check(CLI::ExistingFile);

  // classify
  auto* classify = app.add_subcommand("classify", "Classify texts");
  std::string classify_model, classify_input;
  classify->add_option("--model", classify_model)
      ->required()
      ->check(CLI::ExistingFile);
  classify->add_option("--input", classify_input, "JSONL with id and text")
      ->required()
      ->check(CLI::ExistingFile);

  // align
  auto* align = app.add_subcommand(
      "align", "Type tagged mentions that agree with sentence labels");
  std::string align_tagger, align_classifier, align_sentences, align_stats;
  std::optional<std::size_t> context_window;
  std::optional<double> min_probability;
  bool auto_accept = false;
  align->add_option("--tagger", align_tagger, "Untyped mention tagger")
      ->required()
      ->check(CLI::ExistingFile);
  align->add_option("--classifier", align_classifier)
      ->required()
      ->check(CLI::ExistingFile);
  align->add_option("--sentences", align_sentences, "Sentence corpus")
      ->required()
      ->check(CLI::ExistingFile);
  align->add_option("--context-window", context_window);
  align->add_option("--min-probability", min_probability)
      ->check(CLI::Range(0.0, 1.0));
  align->add_flag("--auto-accept", auto_accept,
                  "Write the final corpus instead of a review queue");
  align->add_option("--stats", align_stats, "Write statistics JSON here");

  // review
  auto* review = app.add_subcommand("review", "Manual review");
  review->require_subcommand(1);
  auto* serve = review->add_subcommand("serve", "Serve the review API");
  std::string serve_queue, serve_decisions, serve_bind, serve_ui;
  std::optional<int> serve_port;
  serve->add_option("--queue", serve_queue)->required()->check(
      CLI::ExistingFile);
  serve->add_option("--decisions", serve_decisions)->required();
  serve->add_option("--bind", serve_bind);
  serve->add_option("--port", serve_port)->check(CLI::Range(0, 65535));
  serve->add_option("--ui-dir", serve_ui)->check(CLI::ExistingDirectory);
  auto* apply = review->add_subcommand("apply", "Replay decisions");
  std::string apply_queue, apply_decisions;
  apply->add_option("--queue", apply_queue)->required()->check(
      CLI::ExistingFile);
  apply->add_option("--decisions", apply_decisions)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Entity-level evaluation");
  std::string eval_gold, eval_model, eval_predictions;
  bool eval_json = false;
  eval->add_option("--gold", eval_gold)->required()->check(CLI::ExistingFile);
  auto* eval_model_opt =
      eval->add_option("--model", eval_model)->check(CLI::ExistingFile);
  auto* eval_pred_opt = eval->add_option("--predictions", eval_predictions)
                            ->check(CLI::ExistingFile);
  eval_model_opt->excludes(eval_pred_opt);
  eval->add_flag("--json", eval_json, "Print the JSON report");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Case-study analytics");
  analyze->require_subcommand(1);
  std::string an_mentions, an_comments, an_model, an_posts;
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--mentions", an_mentions, "Annotated comments")
        ->check(CLI::ExistingFile);
    sub->add_option("--comments", an_comments, "Comments to tag")
        ->check(CLI::ExistingFile);
    sub->add_option("--model", an_model, "Typed tagger")
        ->check(CLI::ExistingFile);
  };
  auto* mentions = analyze->add_subcommand("mentions", "Mentions per post");
  add_inputs(mentions);
  auto* intersections =
      analyze->add_subcommand("intersections", "Category intersections");
  add_inputs(intersections);
  auto* correlate =
      analyze->add_subcommand("correlate", "Engagement correlations");
  add_inputs(correlate);
  correlate->add_option("--posts", an_posts)->required()->check(
      CLI::ExistingFile);

  // stats
  auto* stats = app.add_subcommand("stats", "Entity counts per split");
  std::string stats_train, stats_validation, stats_test;
  stats->add_option("--train", stats_train)->check(CLI::ExistingFile);
  stats->add_option("--validation", stats_validation)
      ->check(CLI::ExistingFile);
  stats->add_option("--test", stats_test)->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const PipelineConfig config = LoadConfig(g);

    if (synth->parsed()) {
      const std::filesystem::path dir = RequireOutput(g, "dataset directory");
      const Lexicon lexicon =
          lexicon_path.empty()
              ? Lexicon::Default()
              : Lexicon::FromJson(Json::parse(ReadTextFile(lexicon_path)));
      WriteSyntheticDataset(dir, lexicon, synth_size, g.seed.value_or(42));
      const SplitSizes split = SplitCounts(synth_size);
      out << fmt::format(
          "wrote {} sentences to {} (train {}, validation {}, test {})\n",
          synth_size, dir.string(), split.train, split.validation,
          split.test);
    } else if (train_tagger->parsed()) {
      const std::filesystem::path path = RequireOutput(g, "model file");
      const auto train = ToTagged(ReadSpanCorpus(tagger_train), untyped);
      const auto validation =
          tagger_validation.empty()
              ? std::vector<TaggedDocument>{}
              : ToTagged(ReadSpanCorpus(tagger_validation), untyped);
      TrainingLog log;
      const CrfModel model = CrfTrain(train, validation, InferTagSet(train),
                                      config.features, config.train, &log);
      SaveModel(model, path);
      PrintTrainingLog(log, out);
      out << "saved tagger to " << path.string() << "\n";
    } else if (train_classifier->parsed()) {
      const std::filesystem::path path = RequireOutput(g, "model file");
      const auto train = ClassifierExamples(clf_train);
      const auto validation = clf_validation.empty()
                                  ? std::vector<TextExample>{}
                                  : ClassifierExamples(clf_validation);
      TrainingLog log;
      const ClassifierModel model =
          ClfTrain(train, validation, config.features, config.train, &log);
      SaveModel(model, path);
      PrintTrainingLog(log, out);
      out << "saved classifier to " << path.string() << "\n";
    } else if (tag->parsed()) {
      const CrfModel model = LoadCrfModel(tag_model);
      const auto records = ReadTextRecords(tag_input);
      Emit(g, SerializeSpanCorpus(TagRecords(model, records)), out);
    } else if (classify->parsed()) {
      const ClassifierModel model = LoadClassifierModel(classify_model);
      std::string data;
      for (const TextRecord& r : ReadTextRecords(classify_input)) {
        const std::vector<double> probs = model.PredictText(r.text);
        const std::size_t best = ArgMax(probs);
        Json line = Json::object();
        line["id"] = r.id;
        line["predicted_class"] = TargetClassName(model.classes()[best]);
        line["probability"] = probs[best];
        Json all = Json::object();
        for (std::size_t c = 0; c < probs.size(); ++c) {
          all[std::string(TargetClassName(model.classes()[c]))] = probs[c];
        }
        line["probabilities"] = all;
        data += line.dump();
        data += '\n';
      }
      Emit(g, data, out);
    } else if (align->parsed()) {
      const std::filesystem::path path = RequireOutput(
          g, auto_accept ? "final corpus" : "review queue");
      AlignmentOptions options = config.alignment;
      if (context_window) options.context_window = *context_window;
      if (min_probability) options.min_probability = *min_probability;
      const CrfModel tagger = LoadCrfModel(align_tagger);
      const ClassifierModel classifier = LoadClassifierModel(align_classifier);
      const auto sentences = ReadSentenceCorpus(align_sentences);
      const AlignmentResult result =
          AlignCorpus(sentences, tagger, classifier, options);
      if (auto_accept || config.auto_accept) {
        WriteSpanCorpus(path, AcceptAll(result.examples));
      } else {
        ExportReviewQueue(result.examples, path);
      }
      const std::string stats_text = result.stats.ToJson().dump(2) + "\n";
      if (!align_stats.empty()) WriteTextFile(align_stats, stats_text);
      out << stats_text;
    } else if (serve->parsed()) {
      ServiceOptions options = config.service;
      if (!serve_bind.empty()) options.bind = serve_bind;
      if (serve_port) options.port = *serve_port;
      if (!serve_ui.empty()) options.ui_dir = serve_ui;
      ReviewService service(serve_queue, serve_decisions, options);
      ServeUntilSignal(service, options, out);
    } else if (apply->parsed()) {
      const std::vector<Document> docs =
          ApplyDecisions(std::filesystem::path(apply_queue),
                         std::filesystem::path(apply_decisions));
      Emit(g, SerializeSpanCorpus(docs), out);
      if (!g.output.empty()) {
        out << fmt::format("wrote {} documents to {}\n", docs.size(),
                           g.output);
      }
    } else if (eval->parsed()) {
      if (eval_model.empty() == eval_predictions.empty()) {
        throw UsageError("eval needs exactly one of --model, --predictions");
      }
      const std::vector<Document> gold = ReadSpanCorpus(eval_gold);
      const EvalReport report =
          eval_model.empty()
              ? EvaluatePredictions(gold, ReadSpanCorpus(eval_predictions))
              : EvaluateCorpus(gold, LoadCrfModel(eval_model));
      const std::string json = ReportToJson(report).dump(2) + "\n";
      out << (eval_json ? json : FormatReport(report));
      if (!g.output.empty()) WriteTextFile(g.output, json);
    } else if (mentions->parsed() || intersections->parsed() ||
               correlate->parsed()) {
      const auto records =
          LoadMentionRecords(an_mentions, an_comments, an_model);
      const MentionTable table = CountMentions(records);
      const auto pairs = CountIntersections(records);
      std::string text;
      Json json;
      if (mentions->parsed()) {
        text = FormatMentionTable(table, pairs);
        json = MentionTableToJson(table, pairs);
      } else if (intersections->parsed()) {
        text = FormatIntersectionTable(pairs);
        json = MentionTableToJson(table, pairs);
      } else {
        const CorrelationMatrix matrix =
            ComputeCorrelationMatrix(ReadPosts(an_posts), table);
        text = FormatCorrelationMatrix(matrix);
        json = CorrelationMatrixToJson(matrix);
      }
      out << text;
      if (!g.output.empty()) WriteTextFile(g.output, json.dump(2) + "\n");
    } else if (stats->parsed()) {
      std::vector<std::vector<Document>> splits;
      std::vector<std::string> names;
      const std::array<std::pair<const char*, const std::string*>, 3> parts = {
          {{"Train", &stats_train},
           {"Validation", &stats_validation},
           {"Testing", &stats_test}}};
      for (const auto& [name, path] : parts) {
        if (path->empty()) continue;
        splits.push_back(ReadSpanCorpus(*path));
        names.emplace_back(name);
      }
      if (splits.empty()) {
        throw UsageError("stats needs at least one of --train, --validation, "
                         "--test");
      }
      const std::string table = FormatDatasetStats(splits, names);
      out << table;
      if (!g.output.empty()) WriteTextFile(g.output, table);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace idner
