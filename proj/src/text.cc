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

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>

#include "idner/errors.h"
#include "idner/unicode.h"

namespace idner {

namespace {

constexpr std::array<char, kNumCategories> kLetters = {'R', 'E', 'S', 'G'};
constexpr std::array<std::string_view, kNumCategories> kNames = {
    "religion", "ethnicity", "sexual_orientation", "gender"};
constexpr std::array<std::string_view, kNumCategories> kTitles = {
    "Religion", "Ethnicity", "Sexual Orientation", "Gender"};
constexpr std::array<std::string_view, kNumSpanLabels> kTagNames = {
    "RELIGION", "ETHNICITY", "SEXUAL_ORIENTATION", "GENDER", "UNTYPED"};

}  // namespace

std::vector<DecodedCodePoint> DecodeUtf8(std::string_view text) {
  std::vector<DecodedCodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t begin = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(begin)});
  }
  return out;
}

void AppendUtf8(char32_t code_point, std::string& out) {
  std::uint8_t buffer[U8_MAX_LENGTH];
  std::int32_t n = 0;
  UBool error = false;
  U8_APPEND(buffer, n, U8_MAX_LENGTH, static_cast<UChar32>(code_point), error);
  if (error) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buffer), n);
}

std::string FoldCase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& cp : DecodeUtf8(text)) {
    AppendUtf8(static_cast<char32_t>(u_tolower(cp.value)), out);
  }
  return out;
}

char CategoryLetter(Category category) {
  return kLetters[static_cast<std::size_t>(category)];
}

std::optional<Category> CategoryFromLetter(char letter) {
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (kLetters[i] == letter) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::string_view CategoryName(Category category) {
  return kNames[static_cast<std::size_t>(category)];
}

std::optional<Category> CategoryFromName(std::string_view name) {
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (kNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::string_view CategoryTitle(Category category) {
  return kTitles[static_cast<std::size_t>(category)];
}

std::size_t SpanLabelIndex(const SpanLabel& label) {
  return label ? static_cast<std::size_t>(*label) : kNumCategories;
}

SpanLabel SpanLabelFromIndex(std::size_t index) {
  if (index >= kNumSpanLabels) {
    throw IndexError("span label index out of range");
  }
  if (index == kNumCategories) return std::nullopt;
  return static_cast<Category>(index);
}

std::string_view SpanLabelTagName(const SpanLabel& label) {
  return kTagNames[SpanLabelIndex(label)];
}

std::string SpanToString(const Span& span) {
  std::string out = "(" + std::to_string(span.start) + "," +
                    std::to_string(span.end) + ",";
  out += span.label ? CategoryName(*span.label) : "untyped";
  out += ")";
  return out;
}

std::size_t BioTag::AlphabetIndex() const {
  if (kind_ == Kind::kOutside) return 0;
  return 1 + 2 * SpanLabelIndex(label_) + (kind_ == Kind::kInside ? 1 : 0);
}

BioTag BioTag::FromAlphabetIndex(std::size_t index) {
  if (index >= kBioAlphabetSize) throw IndexError("tag index out of range");
  if (index == 0) return Outside();
  const SpanLabel label = SpanLabelFromIndex((index - 1) / 2);
  return (index - 1) % 2 == 0 ? Begin(label) : Inside(label);
}

std::string BioTag::ToString() const {
  if (kind_ == Kind::kOutside) return "O";
  std::string out = kind_ == Kind::kBegin ? "B-" : "I-";
  out += SpanLabelTagName(label_);
  return out;
}

std::optional<BioTag> BioTag::Parse(std::string_view text) {
  if (text == "O") return Outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  const std::string_view suffix = text.substr(2);
  for (std::size_t i = 0; i < kNumSpanLabels; ++i) {
    if (kTagNames[i] != suffix) continue;
    if (text[0] == 'B') return Begin(SpanLabelFromIndex(i));
    if (text[0] == 'I') return Inside(SpanLabelFromIndex(i));
  }
  return std::nullopt;
}

std::vector<BioTag> FullTagAlphabet() {
  std::vector<BioTag> tags;
  for (std::size_t i = 0; i < kBioAlphabetSize; ++i) {
    tags.push_back(BioTag::FromAlphabetIndex(i));
  }
  return tags;
}

std::vector<BioTag> UntypedTagSet() {
  return {BioTag::Outside(), BioTag::Begin(std::nullopt),
          BioTag::Inside(std::nullopt)};
}

std::vector<BioTag> TypedTagSet() {
  std::vector<BioTag> tags = {BioTag::Outside()};
  for (Category c : kAllCategories) {
    tags.push_back(BioTag::Begin(c));
    tags.push_back(BioTag::Inside(c));
  }
  return tags;
}

std::string TokenizedText::Slice(std::size_t start, std::size_t end) const {
  if (start > end || end > length()) {
    throw SpanOutOfBoundsError("slice [" + std::to_string(start) + "," +
                               std::to_string(end) + ") outside text of " +
                               std::to_string(length()) + " code points");
  }
  const std::size_t begin_byte = byte_offsets_[start];
  return text_.substr(begin_byte, byte_offsets_[end] - begin_byte);
}

std::optional<std::size_t> TokenizedText::TokenStartingAt(
    std::size_t offset) const {
  auto it = std::lower_bound(
      tokens_.begin(), tokens_.end(), offset,
      [](const Token& t, std::size_t value) { return t.start < value; });
  if (it == tokens_.end() || it->start != offset) return std::nullopt;
  return static_cast<std::size_t>(it - tokens_.begin());
}

std::optional<std::size_t> TokenizedText::TokenEndingAt(
    std::size_t offset) const {
  auto it = std::lower_bound(
      tokens_.begin(), tokens_.end(), offset,
      [](const Token& t, std::size_t value) { return t.end < value; });
  if (it == tokens_.end() || it->end != offset) return std::nullopt;
  return static_cast<std::size_t>(it - tokens_.begin());
}

TokenizedText Tokenize(std::string_view text) {
  TokenizedText out;
  out.text_ = std::string(text);
  out.byte_offsets_.clear();

  const std::vector<DecodedCodePoint> cps = DecodeUtf8(text);
  out.byte_offsets_.reserve(cps.size() + 1);
  for (const auto& cp : cps) out.byte_offsets_.push_back(cp.byte_begin);
  out.byte_offsets_.push_back(text.size());

  std::size_t i = 0;
  while (i < cps.size()) {
    const UChar32 c = cps[i].value;
    if (u_isUWhiteSpace(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (u_isalnum(c)) {
      while (j < cps.size() && u_isalnum(cps[j].value)) ++j;
    }
    const std::size_t begin_byte = cps[i].byte_begin;
    const std::size_t end_byte = j < cps.size() ? cps[j].byte_begin
                                                : text.size();
    out.tokens_.push_back(
        Token{std::string(text.substr(begin_byte, end_byte - begin_byte)), i,
              j});
    i = j;
  }
  return out;
}

std::size_t CodePointLength(std::string_view text) {
  return DecodeUtf8(text).size();
}

void ValidateSpans(std::span<const Span> spans, std::size_t text_length) {
  for (const Span& s : spans) {
    if (s.start >= s.end || s.end > text_length) {
      throw SpanOutOfBoundsError("span " + SpanToString(s) +
                                 " invalid for text of " +
                                 std::to_string(text_length) + " code points");
    }
  }
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].Overlaps(sorted[i])) {
      throw OverlapError("spans " + SpanToString(sorted[i - 1]) + " and " +
                         SpanToString(sorted[i]) + " overlap");
    }
  }
}

std::vector<BioTag> EncodeBio(const TokenizedText& doc,
                              std::span<const Span> spans) {
  ValidateSpans(spans, doc.length());
  std::vector<BioTag> tags(doc.size(), BioTag::Outside());
  for (const Span& s : spans) {
    const auto first = doc.TokenStartingAt(s.start);
    const auto last = doc.TokenEndingAt(s.end);
    if (!first || !last || *last < *first) {
      throw SpanBoundaryError("span " + SpanToString(s) +
                              " does not align with token boundaries");
    }
    tags[*first] = BioTag::Begin(s.label);
    for (std::size_t t = *first + 1; t <= *last; ++t) {
      tags[t] = BioTag::Inside(s.label);
    }
  }
  return tags;
}

std::vector<Span> DecodeBio(const TokenizedText& doc,
                            std::span<const BioTag> tags) {
  if (tags.size() != doc.size()) {
    throw LengthMismatchError("got " + std::to_string(tags.size()) +
                              " tags for " + std::to_string(doc.size()) +
                              " tokens");
  }
  std::vector<Span> spans;
  std::optional<Span> open;
  auto close = [&] {
    if (open) spans.push_back(*open);
    open.reset();
  };
  for (std::size_t t = 0; t < tags.size(); ++t) {
    const BioTag& tag = tags[t];
    const Token& token = doc.token(t);
    switch (tag.kind()) {
      case BioTag::Kind::kOutside:
        close();
        break;
      case BioTag::Kind::kInside:
        if (open && open->label == tag.label()) {
          open->end = token.end;
          break;
        }
        [[fallthrough]];
      case BioTag::Kind::kBegin:
        close();
        open = Span{token.start, token.end, tag.label()};
        break;
    }
  }
  close();
  return spans;
}

}  // namespace idner
