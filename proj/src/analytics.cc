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

#include "idner/analytics.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "idner/errors.h"

namespace idner {

namespace {

// Column order used by the mention and correlation tables.
constexpr std::array<Category, kNumCategories> kTableOrder = {
    Category::kGender, Category::kEthnicity, Category::kSexualOrientation,
    Category::kReligion};

constexpr std::array<std::string_view, kNumCategories> kShortTitles = {
    "Gender", "Ethnicity", "Sexual Or.", "Religion"};

std::int64_t RequireCount(const Json& value, std::string_view key) {
  const std::int64_t n = RequireInt(value, key);
  if (n < 0) throw ParseError(std::string(key) + " must be non-negative");
  return n;
}

std::optional<std::string> OptionalString(const Json& value,
                                          std::string_view key) {
  auto it = value.find(key);
  if (it == value.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError("\"" + std::string(key) + "\" must be a string");
  }
  return it->get<std::string>();
}

template <typename T, typename Fn>
std::vector<T> ReadRecords(const std::filesystem::path& path, Fn parse) {
  std::vector<T> out;
  std::size_t record = 0;
  for (const Json& v : ReadJsonLines(path)) {
    ++record;
    try {
      out.push_back(parse(v));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  return out;
}

Json CountsToJson(const CategoryCounts& counts) {
  Json out = Json::object();
  for (Category c : kTableOrder) {
    out[std::string(CategoryName(c))] = counts[static_cast<std::size_t>(c)];
  }
  return out;
}

Json IntersectionsToJson(const IntersectionCounts& counts) {
  Json out = Json::array();
  for (const auto& [key, n] : counts) {
    Json entry = Json::array();
    entry.push_back(std::string(1, CategoryLetter(key.first())));
    entry.push_back(std::string(1, CategoryLetter(key.second())));
    entry.push_back(n);
    out.push_back(entry);
  }
  return out;
}

}  // namespace

PostRecord PostRecordFromJson(const Json& value) {
  PostRecord p;
  p.post_id = RequireString(value, "post_id");
  p.category = RequireString(value, "category");
  p.comments = RequireCount(value, "comments");
  p.shares = RequireCount(value, "shares");
  p.reactions = RequireCount(value, "reactions");
  p.headline = OptionalString(value, "headline");
  p.date = OptionalString(value, "date");
  return p;
}

Json PostRecordToJson(const PostRecord& post) {
  Json out = Json::object();
  out["post_id"] = post.post_id;
  out["category"] = post.category;
  out["comments"] = post.comments;
  out["shares"] = post.shares;
  out["reactions"] = post.reactions;
  if (post.headline) out["headline"] = *post.headline;
  if (post.date) out["date"] = *post.date;
  return out;
}

std::vector<PostRecord> ReadPosts(const std::filesystem::path& path) {
  return ReadRecords<PostRecord>(path, PostRecordFromJson);
}

std::vector<CommentRecord> ReadComments(const std::filesystem::path& path) {
  return ReadRecords<CommentRecord>(path, [](const Json& v) {
    return CommentRecord{RequireString(v, "post_id"),
                         RequireString(v, "comment_id"),
                         RequireString(v, "text")};
  });
}

MentionRecord MentionRecordFromJson(const Json& value) {
  MentionRecord r;
  r.post_id = RequireString(value, "post_id");
  r.comment_id = RequireString(value, "comment_id");
  r.text = RequireString(value, "text");
  r.spans = SpansFromJson(RequireField(value, "spans"));
  ValidateSpans(r.spans, CodePointLength(r.text));
  std::sort(r.spans.begin(), r.spans.end());
  return r;
}

Json MentionRecordToJson(const MentionRecord& record) {
  Json out = Json::object();
  out["post_id"] = record.post_id;
  out["comment_id"] = record.comment_id;
  out["text"] = record.text;
  out["spans"] = SpansToJson(record.spans);
  return out;
}

std::vector<MentionRecord> ReadMentionRecords(
    const std::filesystem::path& path) {
  return ReadRecords<MentionRecord>(path, MentionRecordFromJson);
}

MentionTable CountMentions(std::span<const MentionRecord> records) {
  MentionTable table;
  for (const MentionRecord& r : records) {
    CategoryCounts& row = table.per_post[r.post_id];
    std::array<bool, kNumCategories> seen{};
    for (const Span& s : r.spans) {
      if (s.label) seen[static_cast<std::size_t>(*s.label)] = true;
    }
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      if (!seen[c]) continue;
      ++row[c];
      ++table.totals[c];
    }
  }
  return table;
}

IntersectionKey::IntersectionKey(Category a, Category b)
    : first_(a), second_(b) {
  if (CategoryLetter(second_) < CategoryLetter(first_)) {
    std::swap(first_, second_);
  }
}

std::string IntersectionKey::ToString() const {
  return fmt::format("{},{}", CategoryLetter(first_), CategoryLetter(second_));
}

bool operator<(const IntersectionKey& a, const IntersectionKey& b) {
  return std::make_tuple(!a.self_pair(), CategoryLetter(a.first_),
                         CategoryLetter(a.second_)) <
         std::make_tuple(!b.self_pair(), CategoryLetter(b.first_),
                         CategoryLetter(b.second_));
}

IntersectionCounts CountCommentIntersections(std::span<const Span> spans) {
  std::vector<Category> typed;
  for (const Span& s : spans) {
    if (s.label) typed.push_back(*s.label);
  }
  IntersectionCounts counts;
  for (std::size_t i = 0; i < typed.size(); ++i) {
    for (std::size_t j = i + 1; j < typed.size(); ++j) {
      ++counts[IntersectionKey(typed[i], typed[j])];
    }
  }
  return counts;
}

std::map<std::string, IntersectionCounts> CountIntersections(
    std::span<const MentionRecord> records) {
  std::map<std::string, IntersectionCounts> out;
  for (const MentionRecord& r : records) {
    IntersectionCounts& post = out[r.post_id];
    for (const auto& [key, n] : CountCommentIntersections(r.spans)) {
      post[key] += n;
    }
  }
  return out;
}

std::string FormatIntersections(const IntersectionCounts& counts) {
  std::string out;
  for (const auto& [key, n] : counts) {
    if (n == 0) continue;
    if (!out.empty()) out += ',';
    out += fmt::format("({},{})", key.ToString(), n);
  }
  return out.empty() ? "-" : out;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatchError(fmt::format(
        "pearson inputs have lengths {} and {}", x.size(), y.size()));
  }
  if (x.size() < 2) {
    throw ConstantVectorError("pearson needs at least two observations");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ConstantVectorError("correlation undefined for a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const std::array<std::string_view, kNumCorrelationVariables>&
CorrelationMatrix::VariableNames() {
  static const std::array<std::string_view, kNumCorrelationVariables> kNames =
      {"Comments",          "Shares",        "Reactions",
       kShortTitles[0],     kShortTitles[1], kShortTitles[2],
       kShortTitles[3]};
  return kNames;
}

CorrelationMatrix ComputeCorrelationMatrix(std::span<const PostRecord> posts,
                                           const MentionTable& mentions) {
  if (posts.size() < 2) {
    throw ConstantVectorError("correlations need at least two posts");
  }
  std::array<std::vector<double>, kNumCorrelationVariables> columns;
  for (const PostRecord& p : posts) {
    columns[0].push_back(static_cast<double>(p.comments));
    columns[1].push_back(static_cast<double>(p.shares));
    columns[2].push_back(static_cast<double>(p.reactions));
    auto it = mentions.per_post.find(p.post_id);
    for (std::size_t k = 0; k < kNumCategories; ++k) {
      const std::size_t c = static_cast<std::size_t>(kTableOrder[k]);
      columns[3 + k].push_back(
          it == mentions.per_post.end() ? 0.0
                                        : static_cast<double>(it->second[c]));
    }
  }
  CorrelationMatrix m;
  for (std::size_t i = 0; i < kNumCorrelationVariables; ++i) {
    for (std::size_t j = i; j < kNumCorrelationVariables; ++j) {
      std::optional<double> r;
      try {
        r = i == j ? (Pearson(columns[i], columns[i]), 1.0)
                   : Pearson(columns[i], columns[j]);
      } catch (const ConstantVectorError&) {
        r = std::nullopt;
      }
      m.values[i][j] = r;
      m.values[j][i] = r;
    }
  }
  return m;
}

std::string FormatMentionTable(
    const MentionTable& mentions,
    const std::map<std::string, IntersectionCounts>& intersections) {
  std::size_t id_width = 5;
  for (const auto& [id, row] : mentions.per_post) {
    id_width = std::max(id_width, id.size());
  }
  std::string out = fmt::format("{:<{}}", "Post", id_width);
  for (std::string_view t : kShortTitles) out += fmt::format("{:>12}", t);
  out += "  Intersections\n";
  for (const auto& [id, row] : mentions.per_post) {
    out += fmt::format("{:<{}}", id, id_width);
    for (Category c : kTableOrder) {
      out += fmt::format("{:>12}", row[static_cast<std::size_t>(c)]);
    }
    auto it = intersections.find(id);
    out += "  ";
    out += it == intersections.end() ? "-" : FormatIntersections(it->second);
    out += '\n';
  }
  out += fmt::format("{:<{}}", "Total", id_width);
  for (Category c : kTableOrder) {
    out += fmt::format("{:>12}", mentions.totals[static_cast<std::size_t>(c)]);
  }
  out += '\n';
  return out;
}

Json MentionTableToJson(
    const MentionTable& mentions,
    const std::map<std::string, IntersectionCounts>& intersections) {
  Json posts = Json::array();
  for (const auto& [id, row] : mentions.per_post) {
    Json entry = Json::object();
    entry["post_id"] = id;
    entry["mentions"] = CountsToJson(row);
    auto it = intersections.find(id);
    entry["intersections"] = it == intersections.end()
                                 ? Json::array()
                                 : IntersectionsToJson(it->second);
    entry["intersections_text"] =
        it == intersections.end() ? "-" : FormatIntersections(it->second);
    posts.push_back(entry);
  }
  Json out = Json::object();
  out["posts"] = posts;
  out["totals"] = CountsToJson(mentions.totals);
  return out;
}

std::string FormatIntersectionTable(
    const std::map<std::string, IntersectionCounts>& intersections) {
  std::size_t id_width = 4;
  for (const auto& [id, c] : intersections) {
    id_width = std::max(id_width, id.size());
  }
  std::string out = fmt::format("{:<{}}  Intersections\n", "Post", id_width);
  for (const auto& [id, counts] : intersections) {
    out += fmt::format("{:<{}}  {}\n", id, id_width,
                       FormatIntersections(counts));
  }
  return out;
}

std::string FormatCorrelationMatrix(const CorrelationMatrix& matrix) {
  const auto& names = CorrelationMatrix::VariableNames();
  std::string out = fmt::format("{:<12}", "");
  for (std::string_view n : names) out += fmt::format("{:>12}", n);
  out += '\n';
  for (std::size_t i = 0; i < kNumCorrelationVariables; ++i) {
    out += fmt::format("{:<12}", names[i]);
    for (std::size_t j = 0; j < kNumCorrelationVariables; ++j) {
      if (j < i) {
        out += fmt::format("{:>12}", "");
      } else if (matrix.values[i][j]) {
        out += fmt::format("{:>12.3f}", *matrix.values[i][j]);
      } else {
        out += fmt::format("{:>12}", "n/a");
      }
    }
    out += '\n';
  }
  return out;
}

Json CorrelationMatrixToJson(const CorrelationMatrix& matrix) {
  Json out = Json::object();
  Json names = Json::array();
  for (std::string_view n : CorrelationMatrix::VariableNames()) {
    names.push_back(n);
  }
  out["variables"] = names;
  Json rows = Json::array();
  for (const auto& row : matrix.values) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v ? Json(*v) : Json(nullptr));
    rows.push_back(r);
  }
  out["matrix"] = rows;
  return out;
}

}  // namespace idner
