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

#include "idner/review.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>

#include <fmt/format.h>

#include "idner/errors.h"

namespace idner {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool ReadDigits(std::string_view text, std::size_t pos, std::size_t count,
                int& out) {
  if (pos + count > text.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
    out = out * 10 + (text[i] - '0');
  }
  return true;
}

bool IsLeap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int DaysInMonth(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  return m == 2 && IsLeap(y) ? 29 : kDays[m - 1];
}

ReviewItem MakeItem(const AlignedExample& example) {
  return ReviewItem{example, ReviewStatus::kPending};
}

}  // namespace

std::string_view ReviewActionName(ReviewAction action) {
  switch (action) {
    case ReviewAction::kAccept:
      return "accept";
    case ReviewAction::kReject:
      return "reject";
    case ReviewAction::kEdit:
      return "edit";
  }
  return "accept";
}

std::optional<ReviewAction> ReviewActionFromName(std::string_view name) {
  if (name == "accept") return ReviewAction::kAccept;
  if (name == "reject") return ReviewAction::kReject;
  if (name == "edit") return ReviewAction::kEdit;
  return std::nullopt;
}

std::string_view ReviewStatusName(ReviewStatus status) {
  return status == ReviewStatus::kPending ? "pending" : "decided";
}

Json ReviewItemToJson(const ReviewItem& item) {
  Json out = Json::object();
  out["id"] = item.example.id;
  out["text"] = item.example.text;
  out["spans"] = SpansToJson(item.example.spans);
  Json provenance = Json::array();
  for (const auto& p : item.example.provenance) {
    provenance.push_back(ProvenanceToJson(p));
  }
  out["provenance"] = provenance;
  out["status"] = ReviewStatusName(item.status);
  return out;
}

ReviewItem ReviewItemFromJson(const Json& value) {
  ReviewItem item;
  item.example.id = RequireString(value, "id");
  item.example.text = RequireString(value, "text");
  item.example.spans = SpansFromJson(RequireField(value, "spans"));
  ValidateSpans(item.example.spans, CodePointLength(item.example.text));
  auto prov = value.find("provenance");
  if (prov != value.end()) {
    if (!prov->is_array()) throw ParseError("provenance must be an array");
    for (const Json& p : *prov) {
      item.example.provenance.push_back(ProvenanceFromJson(p));
    }
  }
  auto status = value.find("status");
  if (status != value.end() && *status == "decided") {
    item.status = ReviewStatus::kDecided;
  }
  return item;
}

Json DecisionToJson(const ReviewDecision& decision) {
  Json out = Json::object();
  out["item_id"] = decision.item_id;
  out["action"] = ReviewActionName(decision.action);
  if (decision.action == ReviewAction::kEdit) {
    out["edited_spans"] = SpansToJson(decision.edited_spans);
  }
  out["reviewer"] = decision.reviewer;
  out["timestamp"] = decision.timestamp;
  return out;
}

ReviewDecision DecisionFromJson(const Json& value, bool require_item_id) {
  if (!value.is_object()) throw ParseError("decision must be a JSON object");
  ReviewDecision d;
  if (require_item_id || value.contains("item_id")) {
    d.item_id = RequireString(value, "item_id");
  }
  const std::string action = RequireString(value, "action");
  auto parsed = ReviewActionFromName(action);
  if (!parsed) throw ParseError("unknown action \"" + action + "\"");
  d.action = *parsed;
  const bool has_edit = value.contains("edited_spans") &&
                        !value["edited_spans"].is_null();
  if (d.action == ReviewAction::kEdit) {
    if (!has_edit) throw ParseError("edit decisions need \"edited_spans\"");
    d.edited_spans = SpansFromJson(value["edited_spans"]);
    std::sort(d.edited_spans.begin(), d.edited_spans.end());
  } else if (has_edit) {
    throw ParseError("\"edited_spans\" is only allowed with action \"edit\"");
  }
  d.reviewer = RequireString(value, "reviewer");
  if (d.reviewer.empty()) throw ParseError("reviewer must not be empty");
  d.timestamp = RequireString(value, "timestamp");
  if (!ParseUtcTimestamp(d.timestamp)) {
    throw ParseError("timestamp \"" + d.timestamp +
                     "\" is not an ISO-8601 UTC time");
  }
  return d;
}

std::optional<UtcInstant> ParseUtcTimestamp(std::string_view text) {
  int year, month, day, hour, minute, second;
  if (text.size() < 20) return std::nullopt;
  if (!ReadDigits(text, 0, 4, year) || text[4] != '-' ||
      !ReadDigits(text, 5, 2, month) || text[7] != '-' ||
      !ReadDigits(text, 8, 2, day) || (text[10] != 'T' && text[10] != 't') ||
      !ReadDigits(text, 11, 2, hour) || text[13] != ':' ||
      !ReadDigits(text, 14, 2, minute) || text[16] != ':' ||
      !ReadDigits(text, 17, 2, second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > DaysInMonth(year, month) ||
      hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  std::int64_t nanos = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 9) {
        nanos = nanos * 10 + (text[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (int i = digits; i < 9; ++i) nanos *= 10;
  }
  const std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "z" && zone != "+00:00") return std::nullopt;

  UtcInstant out;
  out.seconds = DaysFromCivil(year, static_cast<unsigned>(month),
                              static_cast<unsigned>(day)) *
                    86400 +
                hour * 3600 + minute * 60 + second;
  out.nanos = nanos;
  return out;
}

std::string NowUtcTimestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z",
                     tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                     tm.tm_min, tm.tm_sec, ms % 1000);
}

std::vector<ReviewItem> MakeReviewQueue(
    std::span<const AlignedExample> examples) {
  std::vector<ReviewItem> items;
  items.reserve(examples.size());
  for (const auto& e : examples) items.push_back(MakeItem(e));
  std::stable_sort(items.begin(), items.end(),
                   [](const ReviewItem& a, const ReviewItem& b) {
                     return a.example.id < b.example.id;
                   });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].example.id == items[i - 1].example.id) {
      throw ParseError("duplicate item id \"" + items[i].example.id + "\"");
    }
  }
  return items;
}

std::string SerializeReviewQueue(std::span<const ReviewItem> items) {
  std::string out;
  for (const ReviewItem& item : items) {
    out += ReviewItemToJson(item).dump();
    out += '\n';
  }
  return out;
}

std::size_t ExportReviewQueue(std::span<const AlignedExample> examples,
                              const std::filesystem::path& path) {
  const std::vector<ReviewItem> items = MakeReviewQueue(examples);
  WriteTextFile(path, SerializeReviewQueue(items));
  return items.size();
}

std::vector<ReviewItem> ReadReviewQueue(const std::filesystem::path& path) {
  std::vector<ReviewItem> items;
  std::size_t record = 0;
  for (const Json& v : ReadJsonLines(path)) {
    ++record;
    try {
      items.push_back(ReviewItemFromJson(v));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].example.id == items[j].example.id) {
        throw ParseError(path.string() + ": duplicate item id \"" +
                         items[i].example.id + "\"");
      }
    }
  }
  return items;
}

std::vector<ReviewDecision> ReadDecisionLog(const std::filesystem::path& path) {
  std::vector<ReviewDecision> out;
  if (!std::filesystem::exists(path)) return out;
  std::size_t record = 0;
  for (const Json& v : ReadJsonLines(path)) {
    ++record;
    try {
      out.push_back(DecisionFromJson(v));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(record) +
                       ": " + e.what());
    }
  }
  return out;
}

void ValidateDecision(const ReviewItem& item, const ReviewDecision& decision) {
  if (decision.action != ReviewAction::kEdit) return;
  const TokenizedText doc = Tokenize(item.example.text);
  for (const Span& s : decision.edited_spans) {
    if (!s.label) {
      throw InvalidEditedSpanError("edited span " + SpanToString(s) +
                                   " on item \"" + item.example.id +
                                   "\" has no category");
    }
  }
  try {
    EncodeBio(doc, decision.edited_spans);
  } catch (const Error& e) {
    throw InvalidEditedSpanError("invalid edit for item \"" +
                                 item.example.id + "\": " + e.what());
  }
}

std::vector<std::optional<ReviewDecision>> LatestDecisions(
    std::span<const ReviewItem> queue,
    std::span<const ReviewDecision> decisions) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    index.emplace(queue[i].example.id, i);
  }
  std::vector<std::optional<ReviewDecision>> latest(queue.size());
  std::vector<UtcInstant> latest_time(queue.size());
  for (const ReviewDecision& d : decisions) {
    auto it = index.find(d.item_id);
    if (it == index.end()) {
      throw UnknownItemError("decision references unknown item \"" +
                             d.item_id + "\"");
    }
    const auto when = ParseUtcTimestamp(d.timestamp);
    if (!when) throw ParseError("bad timestamp \"" + d.timestamp + "\"");
    auto& slot = latest[it->second];
    if (!slot || *when >= latest_time[it->second]) {
      slot = d;
      latest_time[it->second] = *when;
    }
  }
  return latest;
}

std::vector<Document> ApplyDecisions(
    std::span<const ReviewItem> queue,
    std::span<const ReviewDecision> decisions) {
  const auto latest = LatestDecisions(queue, decisions);
  std::vector<Document> out;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (!latest[i]) continue;
    const ReviewItem& item = queue[i];
    const ReviewDecision& d = *latest[i];
    switch (d.action) {
      case ReviewAction::kReject:
        break;
      case ReviewAction::kAccept:
        out.push_back({item.example.id, item.example.text, item.example.spans});
        break;
      case ReviewAction::kEdit:
        ValidateDecision(item, d);
        out.push_back({item.example.id, item.example.text, d.edited_spans});
        break;
    }
  }
  return out;
}

std::vector<Document> ApplyDecisions(const std::filesystem::path& queue_path,
                                     const std::filesystem::path& log_path) {
  return ApplyDecisions(ReadReviewQueue(queue_path), ReadDecisionLog(log_path));
}

std::vector<Document> AcceptAll(std::span<const AlignedExample> examples) {
  std::vector<Document> out;
  for (const ReviewItem& item : MakeReviewQueue(examples)) {
    out.push_back({item.example.id, item.example.text, item.example.spans});
  }
  return out;
}

DecisionLog::DecisionLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw IoError("cannot open decision log " + path_.string() + ": " +
                  std::strerror(errno));
  }
}

DecisionLog::~DecisionLog() {
  if (fd_ >= 0) ::close(fd_);
}

void DecisionLog::Append(const ReviewDecision& decision) {
  const std::string line = DecisionToJson(decision).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n =
        ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write to decision log failed: " +
                    std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw IoError("fsync of decision log failed: " +
                  std::string(std::strerror(errno)));
  }
}

}  // namespace idner
