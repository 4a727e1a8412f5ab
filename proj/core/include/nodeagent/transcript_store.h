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

#ifndef NODEAGENT_TRANSCRIPT_STORE_H_
#define NODEAGENT_TRANSCRIPT_STORE_H_

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "nodeagent/backend.h"
#include "nodeagent/graph.h"

namespace nodeagent {

struct ExchangeKey {
  std::string problem;  // ProblemKey of the run
  NodeId node = 0;
  std::size_t round = 0;
  Phase phase = Phase::kInit;
  int attempt = 0;

  std::string ToString() const;
};

struct ExchangeRecord {
  ExchangeKey key;
  std::string system_prompt;
  std::string prompt;  // empty in hand-authored transcripts
  std::string reply;
};

// One JSON document per exchange, named by a hash of its key, under one
// directory. Writes are serialized; reads may run concurrently.
class TranscriptStore {
 public:
  explicit TranscriptStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  void Put(const ExchangeRecord& record);
  // nullopt when absent. Throws StoreCorrupt on unreadable documents or a
  // document whose stored key does not match its address.
  std::optional<ExchangeRecord> Get(const ExchangeKey& key) const;
  std::size_t size() const;

  // File holding the exchange for `key`.
  std::filesystem::path PathFor(const ExchangeKey& key) const;

 private:

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace nodeagent

#endif  // NODEAGENT_TRANSCRIPT_STORE_H_
