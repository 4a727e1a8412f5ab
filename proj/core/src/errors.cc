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

#include "nodeagent/errors.h"

#include <utility>

namespace nodeagent {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingNodeClause: return "MissingNodeClause";
    case ErrorCode::kMalformedTuple: return "MalformedTuple";
    case ErrorCode::kEndpointOutOfRange: return "EndpointOutOfRange";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kBackendFailure: return "BackendFailure";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNegativeCapacity: return "NegativeCapacity";
    case ErrorCode::kSourceEqualsSink: return "SourceEqualsSink";
    case ErrorCode::kNotADag: return "NotADAG";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoMatchingTemplate: return "NoMatchingTemplate";
    case ErrorCode::kMissingParameter: return "MissingParameter";
    case ErrorCode::kAmbiguousTask: return "AmbiguousTask";
    case ErrorCode::kInconsistentStates: return "InconsistentStates";
    case ErrorCode::kParseFailure: return "ParseFailure";
    case ErrorCode::kEndpointError: return "EndpointError";
    case ErrorCode::kReplayMiss: return "ReplayMiss";
    case ErrorCode::kStoreCorrupt: return "StoreCorrupt";
    case ErrorCode::kSizeOutOfRange: return "SizeOutOfRange";
  }
  return "Unknown";
}

namespace {

std::string Format(ErrorCode code, const std::string& detail,
                   const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  out += std::string(ErrorCodeName(code));
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : Error(code, message, std::string()) {}

Error::Error(ErrorCode code, std::string detail, std::string stage)
    : std::runtime_error(Format(code, detail, stage)),
      code_(code),
      detail_(std::move(detail)),
      stage_(std::move(stage)) {}

Error Error::WithStage(std::string stage) const {
  return Error(code_, detail_, std::move(stage));
}

}  // namespace nodeagent
