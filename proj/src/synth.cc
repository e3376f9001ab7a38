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

#include "idner/synth.h"

#include <algorithm>
#include <optional>
#include <string_view>

#include <fmt/format.h>

#include "idner/errors.h"
#include "idner/rng.h"

namespace idner {

namespace {

// "{}" marks a mention slot.
constexpr std::string_view kOneSlot[] = {
    "they want to inflame {}",
    "we should get rid of {} now",
    "nobody wants {} around here",
    "{} are ruining this country",
    "keep {} out of our schools",
    "i am so tired of {}",
    "send {} back where they came from",
    "never trust {} with anything",
};

// Offensive mentions: the insult and the group form one phrase.
constexpr std::string_view kCoupled[] = {
    "look at those filthy {} again",
    "typical disgusting {} behaviour",
    "stupid {} everywhere you go",
    "worthless {} should shut up",
};

constexpr std::string_view kTwoSlots[] = {
    "{} and {} are destroying everything",
    "first {} and now {} , what next",
    "i blame {} more than {}",
};

constexpr std::string_view kNeutral[] = {
    "the weather is lovely today",
    "great game last night , what a finish",
    "i had coffee with my neighbour this morning",
    "the new bridge opens next week",
    "does anyone know when the store closes",
    "this recipe needs more garlic",
};

constexpr std::string_view kGroupNouns[] = {"people", "folks", "groups"};

constexpr double kNeutralRate = 0.1;
constexpr double kTwoMentionRate = 0.15;
constexpr double kCoupledRate = 0.3;
constexpr double kGroupNounRate = 0.4;

struct Built {
  std::string text;
  std::vector<Span> spans;
};

// Fills the template's slots in order with the given mentions.
Built Fill(std::string_view pattern,
           const std::vector<std::pair<std::string, SpanLabel>>& mentions) {
  Built out;
  std::size_t slot = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = pattern.find("{}", pos);
    out.text += pattern.substr(pos, next == std::string_view::npos
                                        ? std::string_view::npos
                                        : next - pos);
    if (next == std::string_view::npos) break;
    const auto& [surface, label] = mentions.at(slot++);
    const std::size_t start = CodePointLength(out.text);
    out.text += surface;
    out.spans.push_back(Span{start, CodePointLength(out.text), label});
    pos = next + 2;
  }
  return out;
}

std::string Mention(const Lexicon& lexicon, Category c, Rng& rng) {
  std::string word = rng.Pick(std::span<const std::string>(lexicon[c]));
  if (rng.Bernoulli(kGroupNounRate)) {
    word += ' ';
    word += rng.Pick(std::span<const std::string_view>(kGroupNouns));
  }
  return word;
}

Category OtherCategory(Category c, Rng& rng) {
  const std::size_t offset = 1 + rng.Below(kNumCategories - 1);
  return static_cast<Category>((static_cast<std::size_t>(c) + offset) %
                               kNumCategories);
}

std::string SentenceId(std::string_view prefix, std::size_t i) {
  return fmt::format("{}-{:06}", prefix, i + 1);
}

}  // namespace

const Lexicon& Lexicon::Default() {
  static const Lexicon kDefault = [] {
    Lexicon l;
    l.words[static_cast<std::size_t>(Category::kReligion)] = {
        "islam", "catholic", "muslim", "jews", "jewish", "terrorism",
        "islamophobia", "palestinians", "extremists", "atheists"};
    l.words[static_cast<std::size_t>(Category::kEthnicity)] = {
        "white", "black", "immigrants", "non-white", "racist", "racism",
        "asian", "racial", "african", "latino"};
    l.words[static_cast<std::size_t>(Category::kSexualOrientation)] = {
        "gay", "lesbian", "bisexual", "LGBT", "homosexual", "homosexuality",
        "same-sex", "anti-gay", "heterosexuals", "homophobia"};
    l.words[static_cast<std::size_t>(Category::kGender)] = {
        "women", "male", "men", "transgender", "feminism", "transgendered",
        "gender", "man", "woman", "trans"};
    return l;
  }();
  return kDefault;
}

Lexicon Lexicon::FromJson(const Json& value) {
  if (!value.is_object()) throw ParseError("lexicon must be a JSON object");
  Lexicon l;
  for (Category c : kAllCategories) {
    const Json& list = RequireField(value, CategoryName(c));
    if (!list.is_array() || list.empty()) {
      throw ParseError("lexicon entry \"" + std::string(CategoryName(c)) +
                       "\" must be a non-empty array");
    }
    for (const Json& w : list) {
      if (!w.is_string() || w.get<std::string>().empty()) {
        throw ParseError("lexicon words must be non-empty strings");
      }
      const std::string word = w.get<std::string>();
      const TokenizedText tokens = Tokenize(word);
      if (tokens.empty() || tokens.token(0).start != 0 ||
          tokens.tokens().back().end != tokens.length()) {
        throw ParseError("lexicon word \"" + word +
                         "\" must not start or end with whitespace");
      }
      l.words[static_cast<std::size_t>(c)].push_back(word);
    }
  }
  return l;
}

Json Lexicon::ToJson() const {
  Json out = Json::object();
  for (Category c : kAllCategories) out[std::string(CategoryName(c))] = (*this)[c];
  return out;
}

SyntheticCorpus GenerateSyntheticCorpus(const Lexicon& lexicon,
                                        std::size_t size, std::uint64_t seed) {
  if (size == 0) throw ConfigError("synthetic corpus size must be positive");
  Rng rng(seed);
  SyntheticCorpus corpus;
  std::size_t next_category = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const std::string id = SentenceId("syn", i);
    Built built;
    if (rng.Bernoulli(kNeutralRate)) {
      built.text = rng.Pick(std::span<const std::string_view>(kNeutral));
    } else {
      const Category primary = kAllCategories[next_category];
      next_category = (next_category + 1) % kNumCategories;
      if (rng.Bernoulli(kTwoMentionRate)) {
        const Category secondary = OtherCategory(primary, rng);
        std::vector<std::pair<std::string, SpanLabel>> mentions = {
            {Mention(lexicon, primary, rng), primary},
            {Mention(lexicon, secondary, rng), secondary}};
        built = Fill(rng.Pick(std::span<const std::string_view>(kTwoSlots)),
                     mentions);
      } else {
        const auto& templates = rng.Bernoulli(kCoupledRate)
                                    ? std::span<const std::string_view>(kCoupled)
                                    : std::span<const std::string_view>(kOneSlot);
        built = Fill(rng.Pick(templates),
                     {{Mention(lexicon, primary, rng), primary}});
      }
    }
    LabeledSentence sentence{id, built.text, {}};
    for (const Span& s : built.spans) sentence.labels.push_back(*s.label);
    std::sort(sentence.labels.begin(), sentence.labels.end());
    sentence.labels.erase(
        std::unique(sentence.labels.begin(), sentence.labels.end()),
        sentence.labels.end());
    std::sort(built.spans.begin(), built.spans.end());
    corpus.gold.push_back(Document{id, built.text, built.spans});
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

std::vector<Document> GenerateMentionCorpus(const Lexicon& lexicon,
                                            std::size_t size,
                                            std::uint64_t seed) {
  // Same templates, different stream, labels erased.
  const SyntheticCorpus typed =
      GenerateSyntheticCorpus(lexicon, size, seed ^ 0x6d656e74696f6e73ULL);
  std::vector<Document> out;
  out.reserve(typed.gold.size());
  for (std::size_t i = 0; i < typed.gold.size(); ++i) {
    Document doc = typed.gold[i];
    doc.id = SentenceId("men", i);
    for (Span& s : doc.spans) s.label = std::nullopt;
    out.push_back(std::move(doc));
  }
  return out;
}

SplitSizes SplitCounts(std::size_t n) {
  SplitSizes s;
  s.validation = n / 10;
  s.test = n / 10;
  if (n >= 3) {
    s.validation = std::max<std::size_t>(s.validation, 1);
    s.test = std::max<std::size_t>(s.test, 1);
  } else {
    s.validation = 0;
    s.test = 0;
  }
  s.train = n - s.validation - s.test;
  return s;
}

void WriteSyntheticDataset(const std::filesystem::path& dir,
                           const Lexicon& lexicon, std::size_t size,
                           std::uint64_t seed) {
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(lexicon, size, seed);
  const SplitSizes split = SplitCounts(size);
  const std::array<std::pair<std::string_view, std::size_t>, 3> parts = {{
      {"train", split.train},
      {"validation", split.validation},
      {"test", split.test},
  }};
  std::size_t begin = 0;
  for (const auto& [name, count] : parts) {
    const auto sentences =
        std::span(corpus.sentences).subspan(begin, count);
    const auto gold = std::span(corpus.gold).subspan(begin, count);
    WriteSentenceCorpus(dir / fmt::format("sentences.{}.jsonl", name), sentences);
    WriteSpanCorpus(dir / fmt::format("spans.{}.jsonl", name), gold);
    begin += count;
  }

  const std::vector<Document> mentions =
      GenerateMentionCorpus(lexicon, size, seed);
  const std::size_t mention_validation = std::max<std::size_t>(size / 10, 1);
  const std::size_t mention_train =
      mentions.size() > mention_validation ? mentions.size() - mention_validation
                                           : mentions.size();
  WriteSpanCorpus(dir / "mentions.train.jsonl",
                  std::span(mentions).subspan(0, mention_train));
  WriteSpanCorpus(dir / "mentions.validation.jsonl",
                  std::span(mentions).subspan(mention_train));
}

}  // namespace idner
