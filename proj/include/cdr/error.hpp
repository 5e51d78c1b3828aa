// Copyright 2026-present the cdr project
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

#pragma once

#include <stdexcept>
#include <string>

namespace cdr {

enum class ErrorKind {
    UsageError,
    MalformedHeader,
    MalformedLine,
    DimensionMismatch,
    NonFiniteValue,
    DuplicateId,
    IoFailure,
    OverflowToInfinity,
    NotDivisible,
    TooFewTrainingPoints,
    DimensionNotByteAligned,
    EmptyIndex,
    UnknownCandidateId,
    NormalizationOfZero,
    MissingMarginLabel,
    DivergedLoss,
    UnknownPassageId,
    NotEnoughCandidates,
    MissingScore,
    EmptyPassage,
    EmptyQrels,
    EmptyQuerySet,
    Internal,
};

const char* error_kind_name(ErrorKind kind);

/// Process exit codes used by the CLI: 2 usage, 3 data, 4 internal.
int error_exit_code(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        raise(kind, message);
    }
}

}  // namespace cdr
