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

// Tokenization with code-point offsets, spans over identity categories and
// the IOB2 codec between character spans and per-token tag sequences.

#ifndef IDNER_TEXT_H_
#define IDNER_TEXT_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idner {

// Identity groups recognised by the tagger. The declaration order is the
// canonical class order used by models and reports.
enum class Category : std::uint8_t {
  kReligion = 0,
  kEthnicity = 1,
  kSexualOrientation = 2,
  kGender = 3,
};

inline constexpr std::size_t kNumCategories = 4;
inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::kReligion, Category::kEthnicity, Category::kSexualOrientation,
    Category::kGender};

// Single-letter code: R, E, S, G.
char CategoryLetter(Category category);
std::optional<Category> CategoryFromLetter(char letter);

// Serialized name: "religion", "ethnicity", "sexual_orientation", "gender".
std::string_view CategoryName(Category category);
std::optional<Category> CategoryFromName(std::string_view name);

// Human-readable row title, e.g. "Sexual Orientation".
std::string_view CategoryTitle(Category category);

// A span label is a category, or nullopt for an untyped mention.
using SpanLabel = std::optional<Category>;

// Number of distinct span labels: four categories plus untyped.
inline constexpr std::size_t kNumSpanLabels = kNumCategories + 1;

// Dense index of a label: categories first, untyped last.
std::size_t SpanLabelIndex(const SpanLabel& label);
SpanLabel SpanLabelFromIndex(std::size_t index);

// Upper-case tag suffix: "RELIGION", ..., "UNTYPED".
std::string_view SpanLabelTagName(const SpanLabel& label);

// Half-open range of code points [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  SpanLabel label;

  std::size_t length() const { return end - start; }
  bool Overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span& a, const Span& b) {
    if (auto c = a.start <=> b.start; c != 0) return c;
    if (auto c = a.end <=> b.end; c != 0) return c;
    return SpanLabelIndex(a.label) <=> SpanLabelIndex(b.label);
  }
};

std::string SpanToString(const Span& span);

// One IOB2 tag. The full alphabet has 2 * 5 + 1 = 11 members.
class BioTag {
 public:
  enum class Kind : std::uint8_t { kOutside, kBegin, kInside };

  constexpr BioTag() = default;

  static constexpr BioTag Outside() { return BioTag(); }
  static BioTag Begin(SpanLabel label) { return BioTag(Kind::kBegin, label); }
  static BioTag Inside(SpanLabel label) {
    return BioTag(Kind::kInside, label);
  }

  Kind kind() const { return kind_; }
  const SpanLabel& label() const { return label_; }
  bool is_outside() const { return kind_ == Kind::kOutside; }

  // Position in the canonical alphabet: O = 0, B-x = 1 + 2i, I-x = 2 + 2i.
  std::size_t AlphabetIndex() const;
  static BioTag FromAlphabetIndex(std::size_t index);

  // "O", "B-ETHNICITY", "I-UNTYPED", ...
  std::string ToString() const;
  static std::optional<BioTag> Parse(std::string_view text);

  friend bool operator==(const BioTag&, const BioTag&) = default;

 private:
  BioTag(Kind kind, SpanLabel label) : kind_(kind), label_(label) {}

  Kind kind_ = Kind::kOutside;
  SpanLabel label_;
};

inline constexpr std::size_t kBioAlphabetSize = 2 * kNumSpanLabels + 1;

std::vector<BioTag> FullTagAlphabet();
// {O, B-UNTYPED, I-UNTYPED}: the mention detector's alphabet.
std::vector<BioTag> UntypedTagSet();
// O plus B/I for each of the four categories.
std::vector<BioTag> TypedTagSet();

struct Token {
  std::string surface;
  std::size_t start = 0;  // code points
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// Text plus its tokens. Immutable once built by Tokenize().
class TokenizedText {
 public:
  TokenizedText() : byte_offsets_{0} {}

  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const Token& token(std::size_t i) const { return tokens_[i]; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Length of the text in code points.
  std::size_t length() const { return byte_offsets_.size() - 1; }

  // UTF-8 bytes of code points [start, end). Requires start <= end <= length.
  std::string Slice(std::size_t start, std::size_t end) const;

  // Token whose start (end) offset is exactly `offset`, if any.
  std::optional<std::size_t> TokenStartingAt(std::size_t offset) const;
  std::optional<std::size_t> TokenEndingAt(std::size_t offset) const;

 private:
  friend TokenizedText Tokenize(std::string_view text);

  std::string text_;
  std::vector<Token> tokens_;
  // Byte offset of each code point, plus a final entry equal to text size.
  std::vector<std::size_t> byte_offsets_;
};

// Maximal runs of alphanumeric code points form tokens; every other
// non-whitespace code point is a token of its own. Invalid UTF-8 bytes count
// as one (non-alphanumeric) code point each.
TokenizedText Tokenize(std::string_view text);

// Number of code points in UTF-8 text, under the same decoding as Tokenize().
std::size_t CodePointLength(std::string_view text);

// Checks 0 <= start < end <= length and pairwise disjointness.
// Throws SpanOutOfBoundsError or OverlapError.
void ValidateSpans(std::span<const Span> spans, std::size_t text_length);

// IOB2 encoding. Throws SpanBoundaryError when a span cuts through a token,
// OverlapError for overlapping spans, SpanOutOfBoundsError out of range.
std::vector<BioTag> EncodeBio(const TokenizedText& doc,
                              std::span<const Span> spans);

// Inverse of EncodeBio. An I tag that does not continue a span of the same
// label opens a new span. Output is sorted and non-overlapping.
// Throws LengthMismatchError when tags.size() != doc.size().
std::vector<Span> DecodeBio(const TokenizedText& doc,
                            std::span<const BioTag> tags);

}  // namespace idner

#endif  // IDNER_TEXT_H_
