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

#include "idner/alignment.h"

#include <algorithm>

#include "idner/errors.h"

namespace idner {

namespace {

std::vector<Category> CategoriesFromJson(const Json& value) {
  if (!value.is_array()) throw ParseError("\"labels\" must be an array");
  std::vector<Category> out;
  for (const Json& l : value) {
    auto c = l.is_string() ? CategoryFromName(l.get<std::string>())
                           : std::nullopt;
    if (!c) throw ParseError("unknown category " + l.dump());
    out.push_back(*c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Json CategoriesToJson(std::span<const Category> categories) {
  Json out = Json::array();
  for (Category c : categories) out.push_back(CategoryName(c));
  return out;
}

void CheckAlphabets(const Tagger& tagger, const TargetClassifier& classifier) {
  const std::vector<BioTag> expected = UntypedTagSet();
  const auto& tags = tagger.tag_set();
  for (const BioTag& t : tags) {
    if (t.label()) {
      throw ModelAlphabetError("alignment needs an untyped mention tagger, got "
                               "tag " + t.ToString());
    }
  }
  if (tags.size() != expected.size()) {
    throw ModelAlphabetError("untyped tagger must use {O, B-UNTYPED, I-UNTYPED}");
  }
  if (classifier.classes() != AllTargetClasses()) {
    throw ModelAlphabetError(
        "classifier must predict the five classes religion, ethnicity, "
        "sexual_orientation, gender, none");
  }
}

}  // namespace

bool LabeledSentence::HasLabel(Category c) const {
  return std::binary_search(labels.begin(), labels.end(), c);
}

Json LabeledSentenceToJson(const LabeledSentence& sentence) {
  Json out = Json::object();
  out["id"] = sentence.id;
  out["text"] = sentence.text;
  out["labels"] = CategoriesToJson(sentence.labels);
  return out;
}

LabeledSentence LabeledSentenceFromJson(const Json& value) {
  LabeledSentence s;
  s.id = RequireString(value, "id");
  s.text = RequireString(value, "text");
  s.labels = CategoriesFromJson(RequireField(value, "labels"));
  return s;
}

std::vector<LabeledSentence> ReadSentenceCorpus(
    const std::filesystem::path& path) {
  std::vector<LabeledSentence> out;
  std::size_t record = 0;
  for (const Json& v : ReadJsonLines(path)) {
    ++record;
    try {
      out.push_back(LabeledSentenceFromJson(v));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  return out;
}

void WriteSentenceCorpus(const std::filesystem::path& path,
                         std::span<const LabeledSentence> sentences) {
  std::vector<Json> lines;
  lines.reserve(sentences.size());
  for (const auto& s : sentences) lines.push_back(LabeledSentenceToJson(s));
  WriteTextFile(path, SerializeJsonLines(lines));
}

Json ProvenanceToJson(const SpanProvenance& p) {
  Json out = Json::object();
  Json tagger = Json::object();
  tagger["start"] = p.tagger_span.start;
  tagger["end"] = p.tagger_span.end;
  out["tagger_span"] = tagger;
  out["predicted_class"] = TargetClassName(p.predicted);
  out["probability"] = p.probability;
  out["sentence_labels"] = CategoriesToJson(p.sentence_labels);
  return out;
}

SpanProvenance ProvenanceFromJson(const Json& value) {
  SpanProvenance p;
  const Json& tagger = RequireField(value, "tagger_span");
  p.tagger_span = Span{static_cast<std::size_t>(RequireInt(tagger, "start")),
                       static_cast<std::size_t>(RequireInt(tagger, "end")),
                       std::nullopt};
  const std::string cls = RequireString(value, "predicted_class");
  auto predicted = TargetClassFromName(cls);
  if (!predicted) throw ParseError("unknown class \"" + cls + "\"");
  p.predicted = *predicted;
  const Json& prob = RequireField(value, "probability");
  if (!prob.is_number()) throw ParseError("probability must be a number");
  p.probability = prob.get<double>();
  p.sentence_labels = CategoriesFromJson(RequireField(value, "sentence_labels"));
  return p;
}

Json AlignmentStats::ToJson() const {
  Json out = Json::object();
  out["sentences_in"] = sentences_in;
  out["sentences_unlabeled"] = sentences_unlabeled;
  out["spans_tagged"] = spans_tagged;
  Json per_class = Json::object();
  for (TargetClass c : AllTargetClasses()) {
    per_class[std::string(TargetClassName(c))] =
        spans_classified_per_class[static_cast<std::size_t>(c)];
  }
  out["spans_classified_per_class"] = per_class;
  out["spans_accepted"] = spans_accepted;
  out["spans_rejected_disagreement"] = spans_rejected_disagreement;
  out["spans_rejected_low_confidence"] = spans_rejected_low_confidence;
  out["sentences_emitted"] = sentences_emitted;
  return out;
}

SpanPrediction ClassifySpan(const TargetClassifier& classifier,
                            std::string_view text, const Span& span,
                            std::size_t context_window) {
  const TokenizedText doc = Tokenize(text);
  if (span.start >= span.end || span.end > doc.length()) {
    throw SpanOutOfBoundsError("span " + SpanToString(span) +
                               " outside text of " +
                               std::to_string(doc.length()) + " code points");
  }
  const std::size_t begin =
      span.start > context_window ? span.start - context_window : 0;
  const std::size_t end = std::min(doc.length(), span.end + context_window);
  const std::vector<double> probs =
      classifier.PredictText(doc.Slice(begin, end));
  const std::size_t best = ArgMax(probs);
  return {classifier.classes()[best], probs[best]};
}

AlignmentResult AlignCorpus(std::span<const LabeledSentence> sentences,
                            const Tagger& untyped_tagger,
                            const TargetClassifier& classifier,
                            const AlignmentOptions& options) {
  CheckAlphabets(untyped_tagger, classifier);
  AlignmentResult result;
  AlignmentStats& stats = result.stats;
  for (const LabeledSentence& sentence : sentences) {
    ++stats.sentences_in;
    if (sentence.labels.empty()) {
      ++stats.sentences_unlabeled;
      continue;
    }
    const TokenizedText doc = Tokenize(sentence.text);
    const std::vector<Span> proposed =
        DecodeBio(doc, untyped_tagger.Tag(doc));

    AlignedExample example{sentence.id, sentence.text, {}, {}};
    for (const Span& span : proposed) {
      ++stats.spans_tagged;
      const SpanPrediction p =
          ClassifySpan(classifier, sentence.text, span, options.context_window);
      ++stats.spans_classified_per_class[static_cast<std::size_t>(p.predicted)];
      const auto category = ToCategory(p.predicted);
      if (!category || !sentence.HasLabel(*category)) {
        ++stats.spans_rejected_disagreement;
        continue;
      }
      if (p.probability < options.min_probability) {
        ++stats.spans_rejected_low_confidence;
        continue;
      }
      ++stats.spans_accepted;
      example.spans.push_back(Span{span.start, span.end, *category});
      example.provenance.push_back(SpanProvenance{
          Span{span.start, span.end, std::nullopt}, p.predicted, p.probability,
          sentence.labels});
    }
    if (!example.spans.empty()) {
      ++stats.sentences_emitted;
      result.examples.push_back(std::move(example));
    }
  }
  return result;
}

}  // namespace idner
