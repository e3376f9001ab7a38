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

#include "idner/model_io.h"

#include <cmath>
#include <cstring>
#include <vector>

#include <fmt/format.h>

#include "idner/corpus.h"
#include "idner/errors.h"

namespace idner {

namespace {

constexpr std::string_view kMagic = "IDNERMDL";

std::string_view KindName(ModelKind kind) {
  return kind == ModelKind::kCrf ? "crf" : "classifier";
}

void AppendParameters(std::span<const double> params, std::string& out) {
  out.reserve(out.size() + params.size() * 8);
  for (double v : params) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
  }
}

std::uint64_t Checksum(const Json& header_without_checksum,
                       std::string_view payload) {
  std::string data = header_without_checksum.dump();
  data.append(payload);
  return Fnv1a64(data);
}

std::string Assemble(ModelKind kind, const FeatureConfig& config,
                     const Json& labels, const Json& shape,
                     std::span<const double> params) {
  std::string payload;
  AppendParameters(params, payload);

  Json body = Json::object();
  body["format_version"] = kModelFormatVersion;
  body["kind"] = KindName(kind);
  body["feature_config"] = config.ToJson();
  body["labels"] = labels;
  body["shape"] = shape;
  body["parameter_count"] = params.size();

  Json header = Json::object();
  header["format_version"] = kModelFormatVersion;
  header["kind"] = KindName(kind);
  header["checksum"] = fmt::format("{:016x}", Checksum(body, payload));
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (!header.contains(it.key())) header[it.key()] = it.value();
  }

  const std::string header_text = header.dump();
  const auto header_len = static_cast<std::uint32_t>(header_text.size());
  std::string out(kMagic);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((header_len >> (8 * i)) & 0xff));
  }
  out += header_text;
  out += payload;
  return out;
}

struct ParsedModel {
  Json header;
  FeatureConfig config;
  std::vector<double> params;
};

ParsedModel Parse(std::string_view bytes, ModelKind expected) {
  if (bytes.size() < kMagic.size() + 4 ||
      bytes.substr(0, kMagic.size()) != kMagic) {
    throw CorruptFileError("not an idner model file");
  }
  std::uint32_t header_len = 0;
  for (int i = 0; i < 4; ++i) {
    header_len |= static_cast<std::uint32_t>(
                      static_cast<unsigned char>(bytes[kMagic.size() + i]))
                  << (8 * i);
  }
  const std::size_t header_begin = kMagic.size() + 4;
  if (bytes.size() - header_begin < header_len) {
    throw CorruptFileError("truncated model header");
  }
  ParsedModel out;
  try {
    out.header = Json::parse(bytes.substr(header_begin, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(std::string("unreadable model header: ") + e.what());
  }
  const std::string_view payload = bytes.substr(header_begin + header_len);

  try {
    const Json& version = RequireField(out.header, "format_version");
    if (!version.is_number_integer() ||
        version.get<int>() != kModelFormatVersion) {
      throw FormatVersionError("unsupported model format version " +
                               version.dump() + "; this build reads version " +
                               std::to_string(kModelFormatVersion));
    }
    Json body = out.header;
    const std::string stored = RequireString(body, "checksum");
    body.erase("checksum");
    if (stored != fmt::format("{:016x}", Checksum(body, payload))) {
      throw CorruptFileError("model checksum mismatch");
    }
    const std::string kind = RequireString(out.header, "kind");
    if (kind != KindName(expected)) {
      throw ModelKindError("expected a " + std::string(KindName(expected)) +
                           " model but the file holds a " + kind + " model");
    }
    out.config = FeatureConfig::FromJson(RequireField(out.header,
                                                      "feature_config"));
    const std::int64_t count = RequireInt(out.header, "parameter_count");
    if (count < 0 || static_cast<std::uint64_t>(count) * 8 != payload.size()) {
      throw CorruptFileError("parameter payload size mismatch");
    }
    out.params.resize(static_cast<std::size_t>(count));
    for (std::size_t p = 0; p < out.params.size(); ++p) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(
                    static_cast<unsigned char>(payload[p * 8 + i]))
                << (8 * i);
      }
      std::memcpy(&out.params[p], &bits, sizeof bits);
      if (!std::isfinite(out.params[p])) {
        throw CorruptFileError("non-finite model weight");
      }
    }
  } catch (const ParseError& e) {
    throw CorruptFileError(std::string("malformed model header: ") + e.what());
  } catch (const ConfigError& e) {
    throw CorruptFileError(std::string("malformed model header: ") + e.what());
  }
  return out;
}

void CopyParameters(const std::vector<double>& from, std::span<double> to) {
  if (from.size() != to.size()) {
    throw CorruptFileError("parameter count does not match model shape");
  }
  std::copy(from.begin(), from.end(), to.begin());
}

}  // namespace

std::string SerializeModel(const CrfModel& model) {
  Json labels = Json::array();
  for (const BioTag& t : model.tag_set()) labels.push_back(t.ToString());
  Json shape = Json::array({model.num_tags(), model.dimension(),
                            model.num_states()});
  return Assemble(ModelKind::kCrf, model.feature_config(), labels, shape,
                  model.parameters());
}

std::string SerializeModel(const ClassifierModel& model) {
  Json labels = Json::array();
  for (TargetClass c : model.classes()) labels.push_back(TargetClassName(c));
  Json shape = Json::array({model.num_classes(), model.dimension()});
  return Assemble(ModelKind::kClassifier, model.feature_config(), labels,
                  shape, model.parameters());
}

ModelKind PeekModelKind(std::string_view bytes) {
  try {
    Parse(bytes, ModelKind::kCrf);
    return ModelKind::kCrf;
  } catch (const ModelKindError&) {
    return ModelKind::kClassifier;
  }
}

CrfModel DeserializeCrfModel(std::string_view bytes) {
  ParsedModel parsed = Parse(bytes, ModelKind::kCrf);
  std::vector<BioTag> tags;
  const Json& labels = parsed.header["labels"];
  if (!labels.is_array()) throw CorruptFileError("labels must be an array");
  for (const Json& l : labels) {
    auto tag = l.is_string() ? BioTag::Parse(l.get<std::string>())
                             : std::nullopt;
    if (!tag) throw CorruptFileError("unknown tag " + l.dump());
    tags.push_back(*tag);
  }
  try {
    CrfModel model(std::move(tags), parsed.config);
    CopyParameters(parsed.params, model.parameters());
    return model;
  } catch (const ConfigError& e) {
    throw CorruptFileError(e.what());
  }
}

ClassifierModel DeserializeClassifierModel(std::string_view bytes) {
  ParsedModel parsed = Parse(bytes, ModelKind::kClassifier);
  std::vector<TargetClass> classes;
  const Json& labels = parsed.header["labels"];
  if (!labels.is_array()) throw CorruptFileError("labels must be an array");
  for (const Json& l : labels) {
    auto cls = l.is_string() ? TargetClassFromName(l.get<std::string>())
                             : std::nullopt;
    if (!cls) throw CorruptFileError("unknown class " + l.dump());
    classes.push_back(*cls);
  }
  try {
    ClassifierModel model(std::move(classes), parsed.config);
    CopyParameters(parsed.params, model.parameters());
    return model;
  } catch (const ConfigError& e) {
    throw CorruptFileError(e.what());
  }
}

void SaveModel(const CrfModel& model, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeModel(model));
}

void SaveModel(const ClassifierModel& model,
               const std::filesystem::path& path) {
  WriteTextFile(path, SerializeModel(model));
}

CrfModel LoadCrfModel(const std::filesystem::path& path) {
  return DeserializeCrfModel(ReadTextFile(path));
}

ClassifierModel LoadClassifierModel(const std::filesystem::path& path) {
  return DeserializeClassifierModel(ReadTextFile(path));
}

}  // namespace idner
