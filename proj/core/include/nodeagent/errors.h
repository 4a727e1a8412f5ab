// Copyright 2026 The nodeagent Authors
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

#ifndef NODEAGENT_ERRORS_H_
#define NODEAGENT_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nodeagent {

enum class ErrorCode {
  // graph-core
  kMissingNodeClause,
  kMalformedTuple,
  kEndpointOutOfRange,
  kUnknownNode,
  // runtime
  kSchemaViolation,
  kBackendFailure,
  // programs
  kNegativeWeight,
  kNegativeCapacity,
  kSourceEqualsSink,
  kNotADag,
  kInvalidArgument,
  // orchestrator
  kNoMatchingTemplate,
  kMissingParameter,
  kAmbiguousTask,
  kInconsistentStates,
  // backends
  kParseFailure,
  kEndpointError,
  kReplayMiss,
  kStoreCorrupt,
  // evaluation
  kSizeOutOfRange,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library. `stage` is filled in by the
// orchestrator when an error crosses a pipeline stage boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  const std::string& stage() const { return stage_; }
  const std::string& detail() const { return detail_; }

  // Returns a copy labelled with the pipeline stage it escaped from.
  Error WithStage(std::string stage) const;

 private:
  Error(ErrorCode code, std::string detail, std::string stage);

  ErrorCode code_;
  std::string detail_;
  std::string stage_;
};

}  // namespace nodeagent

#endif  // NODEAGENT_ERRORS_H_
