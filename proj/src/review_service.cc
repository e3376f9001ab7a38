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

#include "idner/review_service.h"

#include <charconv>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include <httplib.h>

#include "idner/corpus.h"
#include "idner/errors.h"
#include "idner/review.h"

namespace idner {

namespace {

constexpr char kJsonType[] = "application/json";
constexpr std::size_t kDefaultLimit = 50;

// Drops a trailing record that was never completed.
void TrimPartialRecord(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return;
  const std::string data = ReadTextFile(path);
  if (data.empty() || data.back() == '\n') return;
  const std::size_t keep = data.rfind('\n');
  std::filesystem::resize_file(path,
                               keep == std::string::npos ? 0 : keep + 1);
}

Json ErrorBody(std::string_view message) {
  Json out = Json::object();
  out["error"] = message;
  return out;
}

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJsonType);
}

std::optional<std::size_t> ParseSize(const std::string& text) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

struct ReviewService::Impl {
  ServiceOptions options;
  std::vector<ReviewItem> queue;
  std::map<std::string, std::size_t> index;
  std::vector<ReviewDecision> decisions;
  std::vector<std::size_t> revisions;  // decisions per item
  std::unique_ptr<DecisionLog> log;
  mutable std::mutex mutex;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Json ItemJson(std::size_t i,
                const std::optional<ReviewDecision>& latest) const {
    ReviewItem item = queue[i];
    item.status = latest ? ReviewStatus::kDecided : ReviewStatus::kPending;
    Json out = ReviewItemToJson(item);
    out["revision"] = revisions[i];
    out["decision"] = latest ? DecisionToJson(*latest) : Json(nullptr);
    return out;
  }

  void ListItems(const httplib::Request& req, httplib::Response& res) const {
    const std::string status =
        req.has_param("status") ? req.get_param_value("status") : "all";
    if (status != "pending" && status != "decided" && status != "all") {
      Reply(res, 400, ErrorBody("status must be pending, decided or all"));
      return;
    }
    std::size_t offset = 0;
    std::size_t limit = kDefaultLimit;
    if (req.has_param("offset")) {
      auto v = ParseSize(req.get_param_value("offset"));
      if (!v) {
        Reply(res, 400, ErrorBody("offset must be a non-negative integer"));
        return;
      }
      offset = *v;
    }
    if (req.has_param("limit")) {
      auto v = ParseSize(req.get_param_value("limit"));
      if (!v) {
        Reply(res, 400, ErrorBody("limit must be a non-negative integer"));
        return;
      }
      limit = *v;
    }
    std::lock_guard lock(mutex);
    const auto latest = LatestDecisions(queue, decisions);
    Json items = Json::array();
    std::size_t matching = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const bool decided = latest[i].has_value();
      if ((status == "pending" && decided) ||
          (status == "decided" && !decided)) {
        continue;
      }
      if (matching >= offset && matching - offset < limit) {
        items.push_back(ItemJson(i, latest[i]));
      }
      ++matching;
    }
    Json out = Json::object();
    out["items"] = items;
    out["total"] = matching;
    out["offset"] = offset;
    out["limit"] = limit;
    Reply(res, 200, out);
  }

  void GetItem(const httplib::Request& req, httplib::Response& res) const {
    const std::string id = req.matches[1];
    std::lock_guard lock(mutex);
    auto it = index.find(id);
    if (it == index.end()) {
      Reply(res, 404, ErrorBody("unknown item \"" + id + "\""));
      return;
    }
    const auto latest = LatestDecisions(queue, decisions);
    Reply(res, 200, ItemJson(it->second, latest[it->second]));
  }

  void PostDecision(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto it = index.find(id);
    if (it == index.end()) {
      Reply(res, 404, ErrorBody("unknown item \"" + id + "\""));
      return;
    }
    const std::size_t item = it->second;
    ReviewDecision decision;
    std::optional<std::size_t> base_revision;
    try {
      Json body = Json::parse(req.body);
      if (!body.is_object()) throw ParseError("body must be a JSON object");
      if (body.contains("item_id") && body["item_id"] != id) {
        throw ParseError("item_id does not match the URL");
      }
      if (auto b = body.find("base_revision"); b != body.end()) {
        if (!b->is_number_unsigned()) {
          throw ParseError("base_revision must be a non-negative integer");
        }
        base_revision = b->get<std::size_t>();
        body.erase("base_revision");
      }
      if (!body.contains("timestamp")) body["timestamp"] = NowUtcTimestamp();
      decision = DecisionFromJson(body, /*require_item_id=*/false);
      decision.item_id = id;
      ValidateDecision(queue[item], decision);
    } catch (const nlohmann::json::exception& e) {
      Reply(res, 400, ErrorBody(std::string("malformed JSON: ") + e.what()));
      return;
    } catch (const Error& e) {
      Reply(res, 400, ErrorBody(e.what()));
      return;
    }

    std::lock_guard lock(mutex);
    const bool conflict = base_revision && *base_revision != revisions[item];
    try {
      log->Append(decision);
    } catch (const Error& e) {
      Reply(res, 500, ErrorBody(e.what()));
      return;
    }
    decisions.push_back(decision);
    ++revisions[item];
    const auto latest = LatestDecisions(queue, decisions);
    Json out = Json::object();
    out["item_id"] = id;
    out["revision"] = revisions[item];
    out["recorded"] = DecisionToJson(decision);
    out["current"] = DecisionToJson(*latest[item]);
    if (conflict) {
      out["error"] = "item changed since base_revision; both decisions kept";
    }
    Reply(res, conflict ? 409 : 200, out);
  }

  void Progress(httplib::Response& res) const {
    std::lock_guard lock(mutex);
    std::size_t decided = 0;
    for (std::size_t r : revisions) decided += r > 0;
    Json out = Json::object();
    out["decided"] = decided;
    out["total"] = queue.size();
    Reply(res, 200, out);
  }

  void Export(httplib::Response& res) const {
    std::lock_guard lock(mutex);
    try {
      const std::vector<Document> docs = ApplyDecisions(queue, decisions);
      res.status = 200;
      res.set_content(SerializeSpanCorpus(docs), "application/x-ndjson");
    } catch (const Error& e) {
      Reply(res, 500, ErrorBody(e.what()));
    }
  }

  void Routes() {
    server.Get("/api/items", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      ListItems(req, res);
    });
    server.Get(R"(/api/items/([^/]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
      GetItem(req, res);
    });
    server.Post(R"(/api/items/([^/]+)/decision)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  PostDecision(req, res);
                });
    server.Get("/api/progress",
               [this](const httplib::Request&, httplib::Response& res) {
                 Progress(res);
               });
    server.Get("/api/export",
               [this](const httplib::Request&, httplib::Response& res) {
                 Export(res);
               });
    if (options.ui_dir &&
        !server.set_mount_point("/", options.ui_dir->string())) {
      throw IoError("UI directory " + options.ui_dir->string() +
                    " does not exist");
    }
  }
};

ReviewService::ReviewService(std::filesystem::path queue_path,
                             std::filesystem::path log_path,
                             ServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->queue = ReadReviewQueue(queue_path);
  for (std::size_t i = 0; i < impl_->queue.size(); ++i) {
    impl_->index.emplace(impl_->queue[i].example.id, i);
  }
  impl_->revisions.assign(impl_->queue.size(), 0);
  TrimPartialRecord(log_path);
  impl_->decisions = ReadDecisionLog(log_path);
  LatestDecisions(impl_->queue, impl_->decisions);  // rejects unknown ids
  for (const ReviewDecision& d : impl_->decisions) {
    ++impl_->revisions[impl_->index.at(d.item_id)];
  }
  impl_->log = std::make_unique<DecisionLog>(log_path);
  impl_->Routes();
}

ReviewService::~ReviewService() { Stop(); }

int ReviewService::Bind() {
  if (impl_->port >= 0) return impl_->port;
  const std::string& host = impl_->options.bind;
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  if (impl_->port < 0) {
    throw IoError("cannot listen on " + host + ":" +
                  std::to_string(impl_->options.port));
  }
  return impl_->port;
}

void ReviewService::Serve() {
  Bind();
  impl_->server.listen_after_bind();
}

void ReviewService::Start() {
  Bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ReviewService::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int ReviewService::port() const { return impl_->port; }

}  // namespace idner
