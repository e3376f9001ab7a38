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

// Model files.
//
// Layout:
//   bytes 0..7    magic "IDNERMDL"
//   bytes 8..11   header length H, little-endian uint32
//   next H bytes  JSON header:
//                   {"format_version": 1, "kind": "crf" | "classifier",
//                    "checksum": "<16 hex digits>",
//                    "feature_config": {...}, "labels": [...],
//                    "shape": [...], "parameter_count": N}
//   rest          N IEEE-754 float64 values, little-endian
//
// The checksum is FNV-1a 64 over the header serialised without its
// "checksum" member, followed by the parameter bytes.

#ifndef IDNER_MODEL_IO_H_
#define IDNER_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "idner/classifier.h"
#include "idner/crf.h"

namespace idner {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { kCrf, kClassifier };

std::string SerializeModel(const CrfModel& model);
std::string SerializeModel(const ClassifierModel& model);

// Throw CorruptFileError, FormatVersionError or ModelKindError.
CrfModel DeserializeCrfModel(std::string_view bytes);
ClassifierModel DeserializeClassifierModel(std::string_view bytes);
ModelKind PeekModelKind(std::string_view bytes);

void SaveModel(const CrfModel& model, const std::filesystem::path& path);
void SaveModel(const ClassifierModel& model, const std::filesystem::path& path);
CrfModel LoadCrfModel(const std::filesystem::path& path);
ClassifierModel LoadClassifierModel(const std::filesystem::path& path);

}  // namespace idner

#endif  // IDNER_MODEL_IO_H_
