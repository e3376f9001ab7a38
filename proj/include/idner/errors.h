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

#ifndef IDNER_ERRORS_H_
#define IDNER_ERRORS_H_

#include <stdexcept>

namespace idner {

// Base class for every data error raised by the library. The CLI maps these
// to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define IDNER_DEFINE_ERROR(Name)  \
  class Name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

IDNER_DEFINE_ERROR(SpanBoundaryError);
IDNER_DEFINE_ERROR(OverlapError);
IDNER_DEFINE_ERROR(LengthMismatchError);
IDNER_DEFINE_ERROR(IndexError);
IDNER_DEFINE_ERROR(SpanOutOfBoundsError);
IDNER_DEFINE_ERROR(EmptyDocumentError);
IDNER_DEFINE_ERROR(EmptyDatasetError);
IDNER_DEFINE_ERROR(DimensionMismatchError);
IDNER_DEFINE_ERROR(ConfigError);
IDNER_DEFINE_ERROR(FormatVersionError);
IDNER_DEFINE_ERROR(CorruptFileError);
IDNER_DEFINE_ERROR(ModelKindError);
IDNER_DEFINE_ERROR(ModelAlphabetError);
IDNER_DEFINE_ERROR(UnknownItemError);
IDNER_DEFINE_ERROR(InvalidEditedSpanError);
IDNER_DEFINE_ERROR(ConstantVectorError);
IDNER_DEFINE_ERROR(ParseError);
IDNER_DEFINE_ERROR(IoError);

#undef IDNER_DEFINE_ERROR

}  // namespace idner

#endif  // IDNER_ERRORS_H_
