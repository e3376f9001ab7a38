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

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "idner/errors.h"
#include "idner/rng.h"
#include "testing/oracles.h"

namespace idner {
namespace {

constexpr Category kR = Category::kReligion;
constexpr Category kE = Category::kEthnicity;
constexpr Category kS = Category::kSexualOrientation;
constexpr Category kG = Category::kGender;

// Consecutive one-character spans with the given labels.
std::vector<Span> SpansOf(std::initializer_list<SpanLabel> labels) {
  std::vector<Span> out;
  std::size_t pos = 0;
  for (const SpanLabel& l : labels) {
    out.push_back({pos, pos + 1, l});
    pos += 2;
  }
  return out;
}

MentionRecord Comment(std::string post, std::string id,
                      std::vector<Span> spans) {
  return {std::move(post), std::move(id), std::string(40, 'x'),
          std::move(spans)};
}

// Two-pass Pearson in long double.
double ReferencePearson(const std::vector<double>& x,
                        const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

TEST(PearsonTest, ReferenceCases) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> neg = {-1, -2, -3};
  const std::vector<double> y = {1, 2, 4};
  EXPECT_DOUBLE_EQ(Pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(Pearson(x, neg), -1.0);
  // sxy = 3, sxx = 2, syy = 42/9.
  EXPECT_NEAR(Pearson(x, y), 0.98198, 1e-5);
  EXPECT_NEAR(Pearson(x, y), 3.0 / std::sqrt(2.0 * 42.0 / 9.0), 1e-15);
}

TEST(PearsonTest, Errors) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> c = {5, 5, 5};
  const std::vector<double> shorter = {1, 2};
  const std::vector<double> one = {1};
  EXPECT_THROW(Pearson(x, c), ConstantVectorError);
  EXPECT_THROW(Pearson(c, x), ConstantVectorError);
  EXPECT_THROW(Pearson(x, shorter), LengthMismatchError);
  EXPECT_THROW(Pearson(one, one), ConstantVectorError);
}

TEST(PearsonTest, AgreesWithReferenceAndIsAffineInvariant) {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.Below(30);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.Uniform() * 100.0;
      y[i] = 0.5 * x[i] + rng.Uniform() * 50.0;
    }
    const double r = Pearson(x, y);
    EXPECT_NEAR(r, ReferencePearson(x, y), 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
    EXPECT_NEAR(Pearson(y, x), r, 1e-15);
    const double a = (rng.Bernoulli(0.5) ? 1.0 : -1.0) *
                     (0.01 + rng.Uniform() * 10.0);
    const double b = rng.Uniform() * 1000.0 - 500.0;
    std::vector<double> ax(n);
    for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
    EXPECT_NEAR(Pearson(ax, y), (a > 0 ? 1.0 : -1.0) * r, 1e-9);
  }
}

TEST(IntersectionTest, KeyOrderingAndNames) {
  EXPECT_EQ(IntersectionKey(kR, kG).ToString(), "G,R");
  EXPECT_EQ(IntersectionKey(kR, kG), IntersectionKey(kG, kR));
  EXPECT_TRUE(IntersectionKey(kG, kG).self_pair());
  // Self-pairs first, each group alphabetical.
  EXPECT_LT(IntersectionKey(kS, kS), IntersectionKey(kE, kG));
  EXPECT_LT(IntersectionKey(kE, kE), IntersectionKey(kG, kG));
  EXPECT_LT(IntersectionKey(kE, kR), IntersectionKey(kG, kR));
  EXPECT_LT(IntersectionKey(kE, kS), IntersectionKey(kG, kR));
}

TEST(IntersectionTest, WorkedExamples) {
  EXPECT_EQ(CountCommentIntersections(SpansOf({kG, kG})),
            (IntersectionCounts{{IntersectionKey(kG, kG), 1}}));
  EXPECT_EQ(CountCommentIntersections(SpansOf({kG, kR, kR})),
            (IntersectionCounts{{IntersectionKey(kG, kR), 2},
                                {IntersectionKey(kR, kR), 1}}));
  EXPECT_TRUE(CountCommentIntersections(SpansOf({kG})).empty());
  EXPECT_TRUE(CountCommentIntersections({}).empty());
}

TEST(IntersectionTest, FormattingMatchesTableNotation) {
  EXPECT_EQ(FormatIntersections({{IntersectionKey(kG, kG), 26}}), "(G,G,26)");
  EXPECT_EQ(FormatIntersections({}), "-");
  EXPECT_EQ(FormatIntersections({{IntersectionKey(kR, kR), 12},
                                 {IntersectionKey(kG, kG), 73}}),
            "(G,G,73),(R,R,12)");
  EXPECT_EQ(FormatIntersections({{IntersectionKey(kG, kR), 1},
                                 {IntersectionKey(kS, kS), 7},
                                 {IntersectionKey(kR, kR), 2}}),
            "(R,R,2),(S,S,7),(G,R,1)");
}

TEST(IntersectionTest, ConstructedPostsReproduceTableStrings) {
  std::vector<MentionRecord> records;
  for (int i = 0; i < 26; ++i) {
    records.push_back(Comment("p1", "c" + std::to_string(i),
                              SpansOf({kG, kG})));
  }
  records.push_back(Comment("p1", "solo", SpansOf({kG})));
  records.push_back(Comment("p2", "none", {}));
  for (int i = 0; i < 73; ++i) {
    records.push_back(Comment("p7", "g" + std::to_string(i),
                              SpansOf({kG, kG})));
  }
  for (int i = 0; i < 4; ++i) {
    records.push_back(Comment("p7", "r" + std::to_string(i),
                              SpansOf({kR, kR, kR})));
  }
  const auto counts = CountIntersections(records);
  EXPECT_EQ(FormatIntersections(counts.at("p1")), "(G,G,26)");
  EXPECT_EQ(FormatIntersections(counts.count("p2") ? counts.at("p2")
                                                   : IntersectionCounts{}),
            "-");
  EXPECT_EQ(FormatIntersections(counts.at("p7")), "(G,G,73),(R,R,12)");
}

TEST(IntersectionTest, AgreesWithPairOracle) {
  Rng rng(67);
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<Span> spans =
        oracle::RandomOffsetSpans(rng, 60, 8, /*allow_untyped=*/true);
    const IntersectionCounts got = CountCommentIntersections(spans);
    const auto want = oracle::BrutePairs(spans);
    std::map<std::pair<char, char>, std::size_t> got_letters;
    std::size_t total = 0;
    for (const auto& [key, n] : got) {
      got_letters[{CategoryLetter(key.first()), CategoryLetter(key.second())}] =
          n;
      total += n;
    }
    EXPECT_EQ(got_letters, want);
    std::size_t typed = 0;
    for (const Span& s : spans) typed += s.label.has_value();
    EXPECT_EQ(total, typed * (typed - (typed > 0)) / 2);
  }
}

TEST(MentionTableTest, CommentLevelCounting) {
  const std::vector<MentionRecord> records = {
      Comment("p1", "c1", SpansOf({kG, kG, kR})),
      Comment("p1", "c2", SpansOf({kG})),
      Comment("p2", "c3", SpansOf({kE, std::nullopt})),
      Comment("p2", "c4", {}),
  };
  const MentionTable t = CountMentions(records);
  const auto idx = [](Category c) { return static_cast<std::size_t>(c); };
  EXPECT_EQ(t.per_post.at("p1")[idx(kG)], 2u);
  EXPECT_EQ(t.per_post.at("p1")[idx(kR)], 1u);
  EXPECT_EQ(t.per_post.at("p2")[idx(kE)], 1u);
  EXPECT_EQ(t.totals[idx(kG)], 2u);
  EXPECT_EQ(t.totals[idx(kS)], 0u);
  EXPECT_TRUE(CountMentions({}).per_post.empty());
}

TEST(MentionTableTest, InvariantUnderReordering) {
  Rng rng(71);
  std::vector<MentionRecord> records;
  for (int i = 0; i < 100; ++i) {
    records.push_back(Comment("p" + std::to_string(rng.Below(5)),
                              "c" + std::to_string(i),
                              oracle::RandomOffsetSpans(rng, 40, 5, true)));
  }
  const MentionTable a = CountMentions(records);
  const auto pairs = CountIntersections(records);
  rng.Shuffle(std::span<MentionRecord>(records));
  const MentionTable b = CountMentions(records);
  EXPECT_EQ(a.per_post, b.per_post);
  EXPECT_EQ(a.totals, b.totals);
  EXPECT_EQ(CountIntersections(records), pairs);
}

TEST(MentionTableTest, FormattedTableHasTotalsRow) {
  const std::vector<MentionRecord> records = {
      Comment("p1", "c1", SpansOf({kG, kG})),
      Comment("p2", "c2", SpansOf({kS}))};
  const std::string text =
      FormatMentionTable(CountMentions(records), CountIntersections(records));
  for (const char* s : {"Post", "Gender", "Ethnicity", "Sexual Or.",
                        "Religion", "Intersections", "Total", "(G,G,1)"}) {
    EXPECT_NE(text.find(s), std::string::npos) << s;
  }
  const Json j =
      MentionTableToJson(CountMentions(records), CountIntersections(records));
  EXPECT_FALSE(j.empty());
}

std::vector<PostRecord> RandomPosts(Rng& rng, std::size_t n) {
  std::vector<PostRecord> posts;
  for (std::size_t i = 0; i < n; ++i) {
    posts.push_back({"p" + std::to_string(i), "politics",
                     static_cast<std::int64_t>(rng.Below(1000)),
                     static_cast<std::int64_t>(rng.Below(500)),
                     static_cast<std::int64_t>(rng.Below(3000)),
                     std::nullopt, std::nullopt});
  }
  return posts;
}

TEST(CorrelationMatrixTest, SymmetricWithUnitDiagonal) {
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<PostRecord> posts = RandomPosts(rng, 3 + rng.Below(20));
    MentionTable mentions;
    for (const PostRecord& p : posts) {
      CategoryCounts& c = mentions.per_post[p.post_id];
      for (std::size_t k = 0; k < kNumCategories; ++k) c[k] = rng.Below(50);
    }
    const CorrelationMatrix m = ComputeCorrelationMatrix(posts, mentions);
    for (std::size_t i = 0; i < kNumCorrelationVariables; ++i) {
      for (std::size_t j = 0; j < kNumCorrelationVariables; ++j) {
        ASSERT_TRUE(m.values[i][j].has_value());
        EXPECT_EQ(*m.values[i][j], *m.values[j][i]);
      }
      EXPECT_EQ(*m.values[i][i], 1.0);
    }
    std::vector<double> comments, shares;
    for (const PostRecord& p : posts) {
      comments.push_back(static_cast<double>(p.comments));
      shares.push_back(static_cast<double>(p.shares));
    }
    EXPECT_NEAR(*m.values[0][1], ReferencePearson(comments, shares), 1e-12);
  }
}

TEST(CorrelationMatrixTest, ConstantColumnsAreUndefined) {
  Rng rng(79);
  const std::vector<PostRecord> posts = RandomPosts(rng, 5);
  MentionTable mentions;  // no mentions at all: every category is constant
  const CorrelationMatrix m = ComputeCorrelationMatrix(posts, mentions);
  EXPECT_TRUE(m.values[0][0].has_value());
  EXPECT_FALSE(m.values[3][3].has_value());
  EXPECT_FALSE(m.values[0][3].has_value());
  EXPECT_FALSE(m.values[3][0].has_value());
  const std::string text = FormatCorrelationMatrix(m);
  EXPECT_NE(text.find("n/a"), std::string::npos);
  EXPECT_NE(text.find("Sexual Or."), std::string::npos);
  EXPECT_TRUE(CorrelationMatrixToJson(m).dump().find("null") !=
              std::string::npos);
  EXPECT_THROW(ComputeCorrelationMatrix(std::span(posts).first(1), mentions),
               ConstantVectorError);
}

TEST(AnalyticsIoTest, ReadsJsonLines) {
  oracle::TempDir dir;
  {
    std::ofstream out(dir / "posts.jsonl");
    out << R"({"post_id":"p1","category":"politics","comments":3,"shares":1,"reactions":9,"headline":"h"})"
        << "\n"
        << R"({"post_id":"p2","category":"sports","comments":0,"shares":0,"reactions":0})"
        << "\n";
  }
  const auto posts = ReadPosts(dir / "posts.jsonl");
  ASSERT_EQ(posts.size(), 2u);
  EXPECT_EQ(posts[0].headline, "h");
  EXPECT_FALSE(posts[1].date.has_value());
  EXPECT_EQ(PostRecordFromJson(PostRecordToJson(posts[0])).reactions, 9);
  EXPECT_THROW(PostRecordFromJson(Json::parse(
                   R"({"post_id":"p","category":"c","comments":-1,"shares":0,"reactions":0})")),
               ParseError);
  const MentionRecord m = Comment("p1", "c1", SpansOf({kG, std::nullopt}));
  const MentionRecord back = MentionRecordFromJson(MentionRecordToJson(m));
  EXPECT_EQ(back.spans, m.spans);
  EXPECT_EQ(back.comment_id, "c1");
}

}  // namespace
}  // namespace idner
