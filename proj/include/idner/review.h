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

// Manual review of aligned examples.
//
// The queue is a JSONL file of items sorted by id. Reviewer verdicts go to
// an append-only JSONL decision log:
//
//   {"item_id": "s1", "action": "accept" | "reject" | "edit",
//    "edited_spans": [...],            // present iff action == "edit"
//    "reviewer": "ana", "timestamp": "2026-10-15T09:30:00Z"}
//
// Replaying the log keeps, per item, the decision with the latest timestamp
// (later lines win ties). Items without a decision never reach the final
// corpus.

#ifndef IDNER_REVIEW_H_
#define IDNER_REVIEW_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idner/alignment.h"
#include "idner/corpus.h"

namespace idner {

enum class ReviewAction { kAccept, kReject, kEdit };
enum class ReviewStatus { kPending, kDecided };

std::string_view ReviewActionName(ReviewAction action);
std::optional<ReviewAction> ReviewActionFromName(std::string_view name);
std::string_view ReviewStatusName(ReviewStatus status);

struct ReviewItem {
  AlignedExample example;
  ReviewStatus status = ReviewStatus::kPending;
};

Json ReviewItemToJson(const ReviewItem& item);
ReviewItem ReviewItemFromJson(const Json& value);

struct ReviewDecision {
  std::string item_id;
  ReviewAction action = ReviewAction::kAccept;
  std::vector<Span> edited_spans;
  std::string reviewer;
  std::string timestamp;  // ISO-8601 UTC

  friend bool operator==(const ReviewDecision&,
                         const ReviewDecision&) = default;
};

Json DecisionToJson(const ReviewDecision& decision);
// Structural validation only (fields, action, timestamp). With
// `require_item_id` false the id may be absent, as in HTTP request bodies.
// Throws ParseError.
ReviewDecision DecisionFromJson(const Json& value, bool require_item_id = true);

// Instant parsed from "YYYY-MM-DDTHH:MM:SS[.fraction](Z|+00:00)".
struct UtcInstant {
  std::int64_t seconds = 0;  // since 1970-01-01T00:00:00Z
  std::int64_t nanos = 0;

  friend auto operator<=>(const UtcInstant&, const UtcInstant&) = default;
};

std::optional<UtcInstant> ParseUtcTimestamp(std::string_view text);
// Current time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string NowUtcTimestamp();

// Pending items sorted by id. Throws ParseError on duplicate ids.
std::vector<ReviewItem> MakeReviewQueue(
    std::span<const AlignedExample> examples);
std::string SerializeReviewQueue(std::span<const ReviewItem> items);
// Returns the number of items written.
std::size_t ExportReviewQueue(std::span<const AlignedExample> examples,
                              const std::filesystem::path& path);
std::vector<ReviewItem> ReadReviewQueue(const std::filesystem::path& path);

// A missing log is an empty log.
std::vector<ReviewDecision> ReadDecisionLog(const std::filesystem::path& path);

// Checks an edit against the item's text: in bounds, non-overlapping,
// token-aligned and typed. Throws InvalidEditedSpanError.
void ValidateDecision(const ReviewItem& item, const ReviewDecision& decision);

// Latest decision per item id (see file comment for the ordering rule).
std::vector<std::optional<ReviewDecision>> LatestDecisions(
    std::span<const ReviewItem> queue,
    std::span<const ReviewDecision> decisions);

// Final span corpus in queue order. Throws UnknownItemError for decisions
// on ids absent from the queue and InvalidEditedSpanError for bad edits.
std::vector<Document> ApplyDecisions(std::span<const ReviewItem> queue,
                                     std::span<const ReviewDecision> decisions);
std::vector<Document> ApplyDecisions(const std::filesystem::path& queue_path,
                                     const std::filesystem::path& log_path);

// Accept-everything shortcut used for synthetic runs.
std::vector<Document> AcceptAll(std::span<const AlignedExample> examples);

// Append-only decision log. Each Append() is written and fsync'ed before it
// returns.
class DecisionLog {
 public:
  explicit DecisionLog(std::filesystem::path path);
  ~DecisionLog();
  DecisionLog(const DecisionLog&) = delete;
  DecisionLog& operator=(const DecisionLog&) = delete;

  void Append(const ReviewDecision& decision);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace idner

#endif  // IDNER_REVIEW_H_
