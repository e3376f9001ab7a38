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
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "idner/errors.h"
#include "idner/features.h"
#include "idner/rng.h"
#include "idner/training.h"
#include "testing/oracles.h"

namespace idner {
namespace {

// Tags a random subset of tokens, seeded by the text so calls repeat.
class RandomTagger : public Tagger {
 public:
  explicit RandomTagger(std::vector<BioTag> tag_set = UntypedTagSet())
      : tag_set_(std::move(tag_set)) {}
  const std::vector<BioTag>& tag_set() const override { return tag_set_; }
  std::vector<BioTag> Tag(const TokenizedText& doc) const override {
    Rng rng(Fnv1a64(doc.text()));
    std::vector<Span> spans = oracle::RandomAlignedSpans(rng, doc, true);
    for (Span& s : spans) s.label = std::nullopt;
    return EncodeBio(doc, spans);
  }

 private:
  std::vector<BioTag> tag_set_;
};

// Probabilities drawn from the input text, so a span's class depends on
// the exact slice the aligner passes in.
class RandomClassifier : public TargetClassifier {
 public:
  RandomClassifier() : classes_(AllTargetClasses()) {}
  const std::vector<TargetClass>& classes() const override { return classes_; }
  std::vector<double> PredictText(std::string_view text) const override {
    seen.emplace_back(text);
    Rng rng(Fnv1a64(text) ^ 0x5eed);
    std::vector<double> p(classes_.size());
    for (double& v : p) v = rng.Uniform() + 1e-3;
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= sum;
    return p;
  }
  mutable std::vector<std::string> seen;

 private:
  std::vector<TargetClass> classes_;
};

std::vector<LabeledSentence> RandomSentences(Rng& rng, std::size_t n) {
  std::vector<LabeledSentence> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledSentence s{"s" + std::to_string(i), oracle::RandomText(rng, 12), {}};
    for (Category c : kAllCategories) {
      if (rng.Bernoulli(0.4)) s.labels.push_back(c);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TEST(AlignmentTest, EmittedSpansAreSound) {
  Rng rng(2024);
  const auto sentences = RandomSentences(rng, 300);
  const RandomTagger tagger;
  const RandomClassifier classifier;
  AlignmentOptions options;
  options.min_probability = 0.3;
  options.context_window = 4;
  const AlignmentResult result =
      AlignCorpus(sentences, tagger, classifier, options);

  std::map<std::string, const LabeledSentence*> by_id;
  for (const auto& s : sentences) by_id[s.id] = &s;
  std::size_t emitted_spans = 0;
  for (const AlignedExample& ex : result.examples) {
    const LabeledSentence& s = *by_id.at(ex.id);
    EXPECT_EQ(ex.text, s.text);
    ASSERT_FALSE(ex.spans.empty());
    ASSERT_EQ(ex.spans.size(), ex.provenance.size());
    const TokenizedText doc = Tokenize(s.text);
    const std::vector<Span> proposed = DecodeBio(doc, tagger.Tag(doc));
    for (std::size_t i = 0; i < ex.spans.size(); ++i) {
      const Span& span = ex.spans[i];
      const SpanProvenance& p = ex.provenance[i];
      ASSERT_TRUE(span.label.has_value());
      EXPECT_TRUE(s.HasLabel(*span.label));
      EXPECT_EQ(ToCategory(p.predicted), span.label);
      EXPECT_GE(p.probability, options.min_probability);
      EXPECT_EQ(p.sentence_labels, s.labels);
      EXPECT_EQ(p.tagger_span, (Span{span.start, span.end, std::nullopt}));
      EXPECT_NE(std::find(proposed.begin(), proposed.end(), p.tagger_span),
                proposed.end());
      // Re-derive the classifier's verdict independently.
      const SpanPrediction again =
          ClassifySpan(classifier, s.text, span, options.context_window);
      EXPECT_EQ(again.predicted, p.predicted);
      EXPECT_EQ(again.probability, p.probability);
    }
    EXPECT_NO_THROW(EncodeBio(doc, ex.spans));
    emitted_spans += ex.spans.size();
  }

  const AlignmentStats& st = result.stats;
  EXPECT_EQ(st.sentences_in, sentences.size());
  EXPECT_EQ(st.sentences_emitted, result.examples.size());
  EXPECT_EQ(st.spans_accepted, emitted_spans);
  EXPECT_EQ(st.spans_accepted + st.spans_rejected_disagreement +
                st.spans_rejected_low_confidence,
            st.spans_tagged);
  EXPECT_EQ(std::accumulate(st.spans_classified_per_class.begin(),
                            st.spans_classified_per_class.end(),
                            std::size_t{0}),
            st.spans_tagged);
  const auto unlabeled = std::count_if(
      sentences.begin(), sentences.end(),
      [](const LabeledSentence& s) { return s.labels.empty(); });
  EXPECT_EQ(st.sentences_unlabeled, static_cast<std::size_t>(unlabeled));
  EXPECT_GT(st.spans_accepted, 0u);
  EXPECT_GT(st.spans_rejected_disagreement, 0u);
  EXPECT_GT(st.spans_rejected_low_confidence, 0u);
}

TEST(AlignmentTest, UnlabeledSentencesAreNotTagged) {
  const std::vector<LabeledSentence> sentences = {
      {"x", "nothing here at all", {}}};
  const RandomTagger tagger;
  const RandomClassifier classifier;
  const AlignmentResult result = AlignCorpus(sentences, tagger, classifier);
  EXPECT_TRUE(result.examples.empty());
  EXPECT_EQ(result.stats.sentences_unlabeled, 1u);
  EXPECT_EQ(result.stats.spans_tagged, 0u);
  EXPECT_TRUE(classifier.seen.empty());
}

TEST(AlignmentTest, TypedTaggerIsRejected) {
  const RandomTagger typed(TypedTagSet());
  const RandomClassifier classifier;
  EXPECT_THROW(AlignCorpus({}, typed, classifier), ModelAlphabetError);
}

TEST(ClassifySpanTest, ContextWindowClipsToText) {
  const RandomClassifier classifier;
  const std::string text = "they want to inflame black people";
  ClassifySpan(classifier, text, Span{21, 33, std::nullopt}, 0);
  ClassifySpan(classifier, text, Span{21, 33, std::nullopt}, 8);
  ClassifySpan(classifier, text, Span{0, 4, std::nullopt}, 100);
  ASSERT_EQ(classifier.seen.size(), 3u);
  EXPECT_EQ(classifier.seen[0], "black people");
  EXPECT_EQ(classifier.seen[1], "inflame black people");
  EXPECT_EQ(classifier.seen[2], text);
  EXPECT_THROW(ClassifySpan(classifier, text, Span{30, 40, std::nullopt}, 0),
               SpanOutOfBoundsError);
}

TEST(ClassifySpanTest, CodePointWindowOnNonAsciiText) {
  const RandomClassifier classifier;
  ClassifySpan(classifier, "é naïve über", Span{2, 7, std::nullopt}, 1);
  EXPECT_EQ(classifier.seen.back(), " naïve ");
}

TEST(ClassifySpanTest, TrainedClassifierLabelsReligiousSpan) {
  const std::vector<TextExample> train = {
      {"muslim", TargetClass::kReligion},
      {"muslims", TargetClass::kReligion},
      {"jewish", TargetClass::kReligion},
      {"black people", TargetClass::kEthnicity},
      {"gay men", TargetClass::kSexualOrientation},
      {"women", TargetClass::kGender},
      {"they hate", TargetClass::kNone}};
  TrainConfig config;
  config.epochs = 60;
  config.learning_rate = 1.0;
  FeatureConfig features;
  features.hash_dimension = 1 << 12;
  const ClassifierModel model = ClfTrain(train, {}, features, config);
  const SpanPrediction p = ClassifySpan(model, "they hate muslim people",
                                        Span{10, 16, std::nullopt}, 0);
  EXPECT_EQ(p.predicted, TargetClass::kReligion);
  EXPECT_GT(p.probability, 0.5);
}

TEST(AlignmentJsonTest, SentenceAndProvenanceRoundTrip) {
  oracle::TempDir dir;
  const std::vector<LabeledSentence> sentences = {
      {"a", "muslim women", {Category::kReligion, Category::kGender}},
      {"b", "plain", {}}};
  WriteSentenceCorpus(dir / "s.jsonl", sentences);
  const auto back = ReadSentenceCorpus(dir / "s.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].labels, sentences[0].labels);
  EXPECT_EQ(back[1].text, "plain");
  const SpanProvenance p{Span{0, 6, std::nullopt}, TargetClass::kReligion,
                         0.75, {Category::kReligion}};
  EXPECT_EQ(ProvenanceFromJson(ProvenanceToJson(p)), p);
  EXPECT_THROW(LabeledSentenceFromJson(Json::parse(R"({"id":"a"})")),
               ParseError);
}

}  // namespace
}  // namespace idner
