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

// JSON Lines readers and writers for the span corpus format:
//
//   {"id": "...", "text": "...",
//    "spans": [{"start": 8, "end": 20, "label": "ethnicity"}]}
//
// Offsets are code points. A null label marks an untyped mention.

#ifndef IDNER_CORPUS_H_
#define IDNER_CORPUS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "idner/text.h"

namespace idner {

using Json = nlohmann::ordered_json;

struct Document {
  std::string id;
  std::string text;
  std::vector<Span> spans;

  friend bool operator==(const Document&, const Document&) = default;
};

// Field accessors that raise ParseError naming the missing/mistyped key.
const Json& RequireField(const Json& object, std::string_view key);
std::string RequireString(const Json& object, std::string_view key);
std::int64_t RequireInt(const Json& object, std::string_view key);

Json SpanLabelToJson(const SpanLabel& label);
SpanLabel SpanLabelFromJson(const Json& value);

Json SpanToJson(const Span& span);
Span SpanFromJson(const Json& value);
Json SpansToJson(std::span<const Span> spans);
std::vector<Span> SpansFromJson(const Json& value);

Json DocumentToJson(const Document& doc);
// Validates span bounds and disjointness against the text.
Document DocumentFromJson(const Json& value);

std::string ReadTextFile(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void WriteTextFile(const std::filesystem::path& path, std::string_view data);

// One JSON value per non-blank line. ParseError carries the line number.
std::vector<Json> ParseJsonLines(std::string_view data,
                                 std::string_view source = "<input>");
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);
std::string SerializeJsonLines(std::span<const Json> values);

std::vector<Document> ReadSpanCorpus(const std::filesystem::path& path);
std::string SerializeSpanCorpus(std::span<const Document> docs);
void WriteSpanCorpus(const std::filesystem::path& path,
                     std::span<const Document> docs);

}  // namespace idner

#endif  // IDNER_CORPUS_H_
