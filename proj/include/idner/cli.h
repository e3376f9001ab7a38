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

#ifndef IDNER_CLI_H_
#define IDNER_CLI_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "idner/alignment.h"
#include "idner/corpus.h"
#include "idner/features.h"
#include "idner/review_service.h"
#include "idner/training.h"

namespace idner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Contents of a --config file:
//   {"features": {...}, "train": {...},
//    "alignment": {"context_window": 0, "min_probability": 0.0,
//                  "auto_accept": false},
//    "service": {"bind": "127.0.0.1", "port": 7878, "ui_dir": "..."}}
// Every section and key is optional. Throws ConfigError.
struct PipelineConfig {
  FeatureConfig features;
  TrainConfig train;
  AlignmentOptions alignment;
  bool auto_accept = false;
  ServiceOptions service;

  static PipelineConfig FromJson(const Json& value);
  static PipelineConfig Load(const std::filesystem::path& path);
};

// Table of entity counts per split and category.
std::string FormatDatasetStats(std::span<const std::vector<Document>> splits,
                               std::span<const std::string> names);

// `args` excludes the program name. Returns kExitOk, kExitUsage or
// kExitData.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace idner

#endif  // IDNER_CLI_H_
