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

// Social-media case-study aggregates: mentions per category, category
// intersections within a comment, and correlations between engagement and
// mention counts.

#ifndef IDNER_ANALYTICS_H_
#define IDNER_ANALYTICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idner/corpus.h"
#include "idner/text.h"

namespace idner {

struct PostRecord {
  std::string post_id;
  std::string category;  // news category, free text
  std::int64_t comments = 0;
  std::int64_t shares = 0;
  std::int64_t reactions = 0;
  std::optional<std::string> headline;
  std::optional<std::string> date;
};

struct CommentRecord {
  std::string post_id;
  std::string comment_id;
  std::string text;
};

struct MentionRecord {
  std::string post_id;
  std::string comment_id;
  std::string text;
  std::vector<Span> spans;
};

// {"post_id", "category", "comments", "shares", "reactions", "headline"?,
//  "date"?}. Throws ParseError on negative counts.
PostRecord PostRecordFromJson(const Json& value);
Json PostRecordToJson(const PostRecord& post);
std::vector<PostRecord> ReadPosts(const std::filesystem::path& path);

// {"post_id", "comment_id", "text"}
std::vector<CommentRecord> ReadComments(const std::filesystem::path& path);
// Comment fields plus "spans".
MentionRecord MentionRecordFromJson(const Json& value);
Json MentionRecordToJson(const MentionRecord& record);
std::vector<MentionRecord> ReadMentionRecords(
    const std::filesystem::path& path);

using CategoryCounts = std::array<std::size_t, kNumCategories>;

struct MentionTable {
  std::map<std::string, CategoryCounts> per_post;
  CategoryCounts totals{};
};

// Number of comments per post with at least one span of each category.
// Untyped spans are ignored.
MentionTable CountMentions(std::span<const MentionRecord> records);

// Unordered category pair, stored with first <= second by letter
// (E < G < R < S).
class IntersectionKey {
 public:
  IntersectionKey(Category a, Category b);

  Category first() const { return first_; }
  Category second() const { return second_; }
  bool self_pair() const { return first_ == second_; }
  std::string ToString() const;  // "G,R"

  friend bool operator==(const IntersectionKey&,
                         const IntersectionKey&) = default;
  // Self-pairs first, then cross pairs; alphabetical within each group.
  friend bool operator<(const IntersectionKey& a, const IntersectionKey& b);

 private:
  Category first_;
  Category second_;
};

using IntersectionCounts = std::map<IntersectionKey, std::size_t>;

// Every unordered pair of distinct typed spans in a comment adds one to the
// key of their categories.
IntersectionCounts CountCommentIntersections(std::span<const Span> spans);
std::map<std::string, IntersectionCounts> CountIntersections(
    std::span<const MentionRecord> records);

// "(G,G,26),(R,S,3)", or "-" when empty.
std::string FormatIntersections(const IntersectionCounts& counts);

// Sample Pearson correlation. Throws LengthMismatchError, or
// ConstantVectorError when either input is constant or shorter than 2.
double Pearson(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kNumCorrelationVariables = 7;

struct CorrelationMatrix {
  static const std::array<std::string_view, kNumCorrelationVariables>&
  VariableNames();

  // Unset where the correlation is undefined.
  std::array<std::array<std::optional<double>, kNumCorrelationVariables>,
             kNumCorrelationVariables>
      values{};
};

// Variables: Comments, Shares, Reactions, Gender, Ethnicity, Sexual Or.,
// Religion. Posts absent from the table count zero mentions. Throws
// ConstantVectorError for fewer than two posts.
CorrelationMatrix ComputeCorrelationMatrix(std::span<const PostRecord> posts,
                                           const MentionTable& mentions);

std::string FormatMentionTable(
    const MentionTable& mentions,
    const std::map<std::string, IntersectionCounts>& intersections);
Json MentionTableToJson(
    const MentionTable& mentions,
    const std::map<std::string, IntersectionCounts>& intersections);
std::string FormatIntersectionTable(
    const std::map<std::string, IntersectionCounts>& intersections);
// Upper triangle; "n/a" for undefined cells.
std::string FormatCorrelationMatrix(const CorrelationMatrix& matrix);
Json CorrelationMatrixToJson(const CorrelationMatrix& matrix);

}  // namespace idner

#endif  // IDNER_ANALYTICS_H_
