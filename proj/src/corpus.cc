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

#include "idner/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "idner/errors.h"

namespace idner {

const Json& RequireField(const Json& object, std::string_view key) {
  if (!object.is_object()) throw ParseError("expected a JSON object");
  auto it = object.find(std::string(key));
  if (it == object.end()) {
    throw ParseError("missing field \"" + std::string(key) + "\"");
  }
  return *it;
}

std::string RequireString(const Json& object, std::string_view key) {
  const Json& value = RequireField(object, key);
  if (!value.is_string()) {
    throw ParseError("field \"" + std::string(key) + "\" must be a string");
  }
  return value.get<std::string>();
}

std::int64_t RequireInt(const Json& object, std::string_view key) {
  const Json& value = RequireField(object, key);
  if (!value.is_number_integer()) {
    throw ParseError("field \"" + std::string(key) + "\" must be an integer");
  }
  return value.get<std::int64_t>();
}

Json SpanLabelToJson(const SpanLabel& label) {
  if (!label) return nullptr;
  return std::string(CategoryName(*label));
}

SpanLabel SpanLabelFromJson(const Json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) {
    if (auto c = CategoryFromName(value.get<std::string>())) return c;
  }
  throw ParseError("unknown span label " + value.dump());
}

Json SpanToJson(const Span& span) {
  Json out = Json::object();
  out["start"] = span.start;
  out["end"] = span.end;
  out["label"] = SpanLabelToJson(span.label);
  return out;
}

Span SpanFromJson(const Json& value) {
  const std::int64_t start = RequireInt(value, "start");
  const std::int64_t end = RequireInt(value, "end");
  if (start < 0 || end < 0) throw ParseError("negative span offset");
  Span span{static_cast<std::size_t>(start), static_cast<std::size_t>(end),
            std::nullopt};
  auto it = value.find("label");
  if (it != value.end()) span.label = SpanLabelFromJson(*it);
  return span;
}

Json SpansToJson(std::span<const Span> spans) {
  Json out = Json::array();
  for (const Span& s : spans) out.push_back(SpanToJson(s));
  return out;
}

std::vector<Span> SpansFromJson(const Json& value) {
  if (!value.is_array()) throw ParseError("\"spans\" must be an array");
  std::vector<Span> spans;
  spans.reserve(value.size());
  for (const Json& s : value) spans.push_back(SpanFromJson(s));
  return spans;
}

Json DocumentToJson(const Document& doc) {
  Json out = Json::object();
  out["id"] = doc.id;
  out["text"] = doc.text;
  out["spans"] = SpansToJson(doc.spans);
  return out;
}

Document DocumentFromJson(const Json& value) {
  Document doc;
  doc.id = RequireString(value, "id");
  doc.text = RequireString(value, "text");
  doc.spans = SpansFromJson(RequireField(value, "spans"));
  ValidateSpans(doc.spans, CodePointLength(doc.text));
  std::sort(doc.spans.begin(), doc.spans.end());
  return doc;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename into " + path.string());
}

std::vector<Json> ParseJsonLines(std::string_view data,
                                 std::string_view source) {
  std::vector<Json> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string_view::npos) eol = data.size();
    std::string_view line = data.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      values.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  return values;
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  return ParseJsonLines(ReadTextFile(path), path.string());
}

std::string SerializeJsonLines(std::span<const Json> values) {
  std::string out;
  for (const Json& v : values) {
    out += v.dump();
    out += '\n';
  }
  return out;
}

std::vector<Document> ReadSpanCorpus(const std::filesystem::path& path) {
  std::vector<Document> docs;
  std::size_t line = 0;
  for (const Json& value : ReadJsonLines(path)) {
    ++line;
    try {
      docs.push_back(DocumentFromJson(value));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": record " + std::to_string(line) +
                       ": " + e.what());
    }
  }
  return docs;
}

std::string SerializeSpanCorpus(std::span<const Document> docs) {
  std::string out;
  for (const Document& d : docs) {
    out += DocumentToJson(d).dump();
    out += '\n';
  }
  return out;
}

void WriteSpanCorpus(const std::filesystem::path& path,
                     std::span<const Document> docs) {
  WriteTextFile(path, SerializeSpanCorpus(docs));
}

}  // namespace idner
