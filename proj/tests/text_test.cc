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

#include "idner/text.h"

#include <gtest/gtest.h>

#include "idner/corpus.h"
#include "idner/errors.h"
#include "idner/rng.h"
#include "testing/oracles.h"

namespace idner {
namespace {

std::vector<std::string> Surfaces(const TokenizedText& doc) {
  std::vector<std::string> out;
  for (const Token& t : doc.tokens()) out.push_back(t.surface);
  return out;
}

TEST(TokenizeTest, SplitsWordsAndPunctuation) {
  const TokenizedText doc = Tokenize("they want to inflame black people!");
  EXPECT_EQ(Surfaces(doc),
            (std::vector<std::string>{"they", "want", "to", "inflame",
                                      "black", "people", "!"}));
  EXPECT_EQ(doc.token(4).start, 21u);
  EXPECT_EQ(doc.token(4).end, 26u);
}

TEST(TokenizeTest, EveryNonAlnumCodePointIsItsOwnToken) {
  EXPECT_EQ(Surfaces(Tokenize("don't same-sex...")),
            (std::vector<std::string>{"don", "'", "t", "same", "-", "sex",
                                      ".", ".", "."}));
}

TEST(TokenizeTest, OffsetsCountCodePoints) {
  const TokenizedText doc = Tokenize("café über 日本");
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc.token(0).surface, "café");
  EXPECT_EQ(doc.token(0).end, 4u);
  EXPECT_EQ(doc.token(1).start, 5u);
  EXPECT_EQ(doc.token(2).start, 10u);
  EXPECT_EQ(doc.token(2).end, 12u);
  EXPECT_EQ(doc.length(), 12u);
  EXPECT_EQ(doc.Slice(5, 9), "über");
}

TEST(TokenizeTest, UnicodeWhitespaceSeparates) {
  // U+00A0 no-break space and U+3000 ideographic space.
  const TokenizedText doc = Tokenize("a b　c");
  EXPECT_EQ(Surfaces(doc), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(TokenizeTest, EmptyAndBlankTexts) {
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize("  \t\n ").empty());
  EXPECT_EQ(Tokenize("  \t\n ").length(), 5u);
}

TEST(TokenizeTest, InvalidUtf8ByteIsOneCodePoint) {
  const std::string text = "ab\xff" "cd";
  const TokenizedText doc = Tokenize(text);
  EXPECT_EQ(CodePointLength(text), 5u);
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc.token(1).surface, "\xff");  // original bytes kept
  EXPECT_EQ(doc.token(2).start, 3u);
}

TEST(TokenizeTest, TokenLookupByOffset) {
  const TokenizedText doc = Tokenize("inflame black people");
  EXPECT_EQ(doc.TokenStartingAt(8), 1u);
  EXPECT_EQ(doc.TokenEndingAt(20), 2u);
  EXPECT_FALSE(doc.TokenStartingAt(9).has_value());
  EXPECT_FALSE(doc.TokenEndingAt(7 + 1).has_value());
}

TEST(CategoryTest, LettersNamesAndTitles) {
  EXPECT_EQ(CategoryLetter(Category::kGender), 'G');
  EXPECT_EQ(CategoryLetter(Category::kSexualOrientation), 'S');
  EXPECT_EQ(CategoryFromLetter('R'), Category::kReligion);
  EXPECT_FALSE(CategoryFromLetter('X').has_value());
  EXPECT_EQ(CategoryName(Category::kSexualOrientation), "sexual_orientation");
  EXPECT_EQ(CategoryFromName("ethnicity"), Category::kEthnicity);
  EXPECT_EQ(CategoryTitle(Category::kSexualOrientation), "Sexual Orientation");
}

TEST(BioTagTest, AlphabetIndexRoundTrip) {
  const std::vector<BioTag> all = FullTagAlphabet();
  ASSERT_EQ(all.size(), kBioAlphabetSize);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].AlphabetIndex(), i);
    EXPECT_EQ(BioTag::FromAlphabetIndex(i), all[i]);
    EXPECT_EQ(BioTag::Parse(all[i].ToString()), all[i]);
  }
  EXPECT_EQ(BioTag::Outside().AlphabetIndex(), 0u);
  EXPECT_EQ(BioTag::Begin(Category::kReligion).AlphabetIndex(), 1u);
  EXPECT_EQ(BioTag::Inside(Category::kReligion).AlphabetIndex(), 2u);
  EXPECT_FALSE(BioTag::Parse("B-NOPE").has_value());
  EXPECT_FALSE(BioTag::Parse("X-GENDER").has_value());
}

TEST(BioTagTest, TagSets) {
  EXPECT_EQ(UntypedTagSet().size(), 3u);
  EXPECT_EQ(TypedTagSet().size(), 9u);
  for (const BioTag& t : TypedTagSet()) {
    EXPECT_TRUE(t.is_outside() || t.label().has_value());
  }
}

TEST(EncodeBioTest, BlackPeopleSpan) {
  const TokenizedText doc = Tokenize("inflame black people");
  const std::vector<Span> spans = {{8, 20, Category::kEthnicity}};
  const std::vector<BioTag> tags = EncodeBio(doc, spans);
  EXPECT_EQ(tags, (std::vector<BioTag>{BioTag::Outside(),
                                        BioTag::Begin(Category::kEthnicity),
                                        BioTag::Inside(Category::kEthnicity)}));
  EXPECT_EQ(doc.Slice(8, 20), "black people");
  EXPECT_EQ(DecodeBio(doc, tags), spans);
}

TEST(EncodeBioTest, SpanCuttingATokenIsRejected) {
  const TokenizedText doc = Tokenize("inflame black people");
  const std::vector<Span> spans = {{9, 20, Category::kEthnicity}};
  EXPECT_THROW(EncodeBio(doc, spans), SpanBoundaryError);
  const std::vector<Span> tail = {{8, 19, Category::kEthnicity}};
  EXPECT_THROW(EncodeBio(doc, tail), SpanBoundaryError);
}

TEST(EncodeBioTest, OverlapAndBoundsErrors) {
  const TokenizedText doc = Tokenize("inflame black people");
  const std::vector<Span> overlap = {{8, 20, Category::kEthnicity},
                                     {14, 20, Category::kGender}};
  EXPECT_THROW(EncodeBio(doc, overlap), OverlapError);
  const std::vector<Span> outside = {{8, 21, Category::kEthnicity}};
  EXPECT_THROW(EncodeBio(doc, outside), SpanOutOfBoundsError);
  const std::vector<Span> empty = {{8, 8, Category::kEthnicity}};
  EXPECT_THROW(EncodeBio(doc, empty), SpanOutOfBoundsError);
}

TEST(DecodeBioTest, StrayInsideOpensNewSpan) {
  const TokenizedText doc = Tokenize("a b c d");
  const std::vector<BioTag> tags = {
      BioTag::Inside(Category::kGender), BioTag::Inside(Category::kGender),
      BioTag::Inside(Category::kReligion), BioTag::Outside()};
  EXPECT_EQ(DecodeBio(doc, tags),
            (std::vector<Span>{{0, 3, Category::kGender},
                               {4, 5, Category::kReligion}}));
}

TEST(DecodeBioTest, AdjacentBeginsAreSeparateSpans) {
  const TokenizedText doc = Tokenize("a b");
  const std::vector<BioTag> tags = {BioTag::Begin(std::nullopt),
                                    BioTag::Begin(std::nullopt)};
  EXPECT_EQ(DecodeBio(doc, tags), (std::vector<Span>{{0, 1, std::nullopt},
                                                     {2, 3, std::nullopt}}));
}

TEST(DecodeBioTest, LengthMismatch) {
  const TokenizedText doc = Tokenize("a b");
  const std::vector<BioTag> tags = {BioTag::Outside()};
  EXPECT_THROW(DecodeBio(doc, tags), LengthMismatchError);
}

TEST(CodecPropertyTest, DecodeInvertsEncodeOnRandomDocuments) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const TokenizedText doc = Tokenize(oracle::RandomText(rng, 12));
    const std::vector<Span> spans =
        oracle::RandomAlignedSpans(rng, doc, /*allow_untyped=*/true);
    const std::vector<BioTag> tags = EncodeBio(doc, spans);
    ASSERT_EQ(tags.size(), doc.size());
    EXPECT_EQ(DecodeBio(doc, tags), spans) << doc.text();
    EXPECT_EQ(EncodeBio(doc, DecodeBio(doc, tags)), tags);
  }
}

TEST(CodecPropertyTest, FuzzedTagsNeverDecodeToOverlaps) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const TokenizedText doc = Tokenize(oracle::RandomText(rng, 12));
    std::vector<BioTag> tags;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      tags.push_back(BioTag::FromAlphabetIndex(rng.Below(kBioAlphabetSize)));
    }
    const std::vector<Span> spans = DecodeBio(doc, tags);
    EXPECT_NO_THROW(ValidateSpans(spans, doc.length()));
    EXPECT_TRUE(std::is_sorted(spans.begin(), spans.end()));
    // Repaired tags are a fixed point of decode/encode.
    EXPECT_EQ(DecodeBio(doc, EncodeBio(doc, spans)), spans);
  }
}

TEST(CorpusTest, DocumentJsonRoundTrip) {
  const Document doc{"d1", "inflame black people",
                     {{8, 20, Category::kEthnicity}, {0, 7, std::nullopt}}};
  const Document back = DocumentFromJson(DocumentToJson(doc));
  EXPECT_EQ(back.id, "d1");
  // Spans come back sorted.
  EXPECT_EQ(back.spans, (std::vector<Span>{{0, 7, std::nullopt},
                                           {8, 20, Category::kEthnicity}}));
}

TEST(CorpusTest, RejectsMalformedRecords) {
  EXPECT_THROW(DocumentFromJson(Json::parse(R"({"id":"x"})")), ParseError);
  EXPECT_THROW(DocumentFromJson(Json::parse(
                   R"({"id":"x","text":"ab","spans":[{"start":0,"end":3,"label":null}]})")),
               SpanOutOfBoundsError);
  EXPECT_THROW(DocumentFromJson(Json::parse(
                   R"({"id":"x","text":"ab","spans":[{"start":0,"end":1,"label":"alien"}]})")),
               ParseError);
  EXPECT_THROW(ParseJsonLines("{\"a\":1}\n{oops\n"), ParseError);
}

TEST(CorpusTest, JsonLinesSkipBlankLines) {
  EXPECT_EQ(ParseJsonLines("{\"a\":1}\n\n{\"a\":2}\n").size(), 2u);
}

TEST(CorpusTest, SpanCorpusFileRoundTrip) {
  oracle::TempDir dir;
  const std::vector<Document> docs = {
      {"a", "café über", {{0, 4, Category::kReligion}}},
      {"b", "", {}},
  };
  WriteSpanCorpus(dir / "nested" / "c.jsonl", docs);
  const std::vector<Document> back = ReadSpanCorpus(dir / "nested" / "c.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].text, "café über");
  EXPECT_EQ(back[0].spans, docs[0].spans);
  EXPECT_THROW(ReadSpanCorpus(dir / "missing.jsonl"), IoError);
}

}  // namespace
}  // namespace idner
