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

#include "nodeagent/transcript_store.h"

#include <fstream>
#include <sstream>

#include "fnv.h"
#include "json.hpp"
#include "nodeagent/errors.h"

namespace nodeagent {

namespace {

std::optional<Phase> PhaseFromName(std::string_view name) {
  if (name == "init") return Phase::kInit;
  if (name == "update") return Phase::kUpdate;
  if (name == "send") return Phase::kSend;
  return std::nullopt;
}

}  // namespace

std::string ExchangeKey::ToString() const {
  return problem + "/" + std::to_string(node) + "/" + std::to_string(round) +
         "/" + std::string(PhaseName(phase)) + "/" + std::to_string(attempt);
}

TranscriptStore::TranscriptStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::kStoreCorrupt,
                "cannot create " + dir_.string() + ": " + ec.message());
  }
}

std::filesystem::path TranscriptStore::PathFor(const ExchangeKey& key) const {
  return dir_ / (internal::Hex64(internal::Fnv1a64(key.ToString())) + ".json");
}

void TranscriptStore::Put(const ExchangeRecord& record) {
  nlohmann::json doc;
  doc["problem"] = record.key.problem;
  doc["node"] = record.key.node;
  doc["round"] = record.key.round;
  doc["phase"] = std::string(PhaseName(record.key.phase));
  doc["attempt"] = record.key.attempt;
  doc["system"] = record.system_prompt;
  doc["prompt"] = record.prompt;
  doc["reply"] = record.reply;
  std::lock_guard<std::mutex> lock(mu_);
  std::filesystem::path path = PathFor(record.key);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::kStoreCorrupt, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<ExchangeRecord> TranscriptStore::Get(const ExchangeKey& key) const {
  std::filesystem::path path = PathFor(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kStoreCorrupt, path.string() + ": " + e.what());
  }
  ExchangeRecord record;
  try {
    record.key.problem = doc.at("problem").get<std::string>();
    record.key.node = doc.at("node").get<NodeId>();
    record.key.round = doc.at("round").get<std::size_t>();
    auto phase = PhaseFromName(doc.at("phase").get<std::string>());
    if (!phase) throw Error(ErrorCode::kStoreCorrupt, path.string() + ": bad phase");
    record.key.phase = *phase;
    record.key.attempt = doc.at("attempt").get<int>();
    record.system_prompt = doc.value("system", "");
    record.prompt = doc.value("prompt", "");
    record.reply = doc.at("reply").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kStoreCorrupt, path.string() + ": " + e.what());
  }
  if (record.key.ToString() != key.ToString()) {
    throw Error(ErrorCode::kStoreCorrupt,
                path.string() + " holds " + record.key.ToString());
  }
  return record;
}

std::size_t TranscriptStore::size() const {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".json") ++n;
  }
  return n;
}

}  // namespace nodeagent
