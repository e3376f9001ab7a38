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

#ifndef IDNER_UNICODE_H_
#define IDNER_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace idner {

struct DecodedCodePoint {
  char32_t value;
  std::size_t byte_begin;
};

// Ill-formed sequences decode to U+FFFD, one per offending byte run as
// reported by ICU's U8_NEXT.
std::vector<DecodedCodePoint> DecodeUtf8(std::string_view text);

void AppendUtf8(char32_t code_point, std::string& out);

// Simple (per code point) lower-casing.
std::string FoldCase(std::string_view text);

}  // namespace idner

#endif  // IDNER_UNICODE_H_
