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

// HTTP/JSON service over a review queue and its decision log.
//
//   GET  /api/items?status=pending|decided|all&offset=0&limit=50
//   GET  /api/items/{id}
//   POST /api/items/{id}/decision   body: decision without item_id
//   GET  /api/progress              {"decided": k, "total": n}
//   GET  /api/export                final corpus as span JSONL
//
// A POST may carry "base_revision", the number of decisions the client saw
// for the item. If others were recorded since, the decision is still stored
// and the reply is 409. A missing "timestamp" is filled in by the server.
// Every decision is appended to the log and synced before the reply.

#ifndef IDNER_REVIEW_SERVICE_H_
#define IDNER_REVIEW_SERVICE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace idner {

struct ServiceOptions {
  std::string bind = "127.0.0.1";
  int port = 7878;  // 0 picks a free port
  std::optional<std::filesystem::path> ui_dir;
};

class ReviewService {
 public:
  // Loads the queue and replays the existing log. A partial record at the
  // end of the log (an unacknowledged write) is dropped.
  ReviewService(std::filesystem::path queue_path,
                std::filesystem::path log_path, ServiceOptions options = {});
  ~ReviewService();
  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  // Binds the listening socket and returns the port. Throws IoError.
  int Bind();
  // Serves until Stop(). Binds first if needed.
  void Serve();
  // Serve() on a background thread; returns once the server accepts.
  void Start();
  void Stop();

  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace idner

#endif  // IDNER_REVIEW_SERVICE_H_
