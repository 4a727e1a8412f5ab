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

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nodeagent/answer.h"
#include "nodeagent/chat_transport.h"
#include "nodeagent/engine.h"
#include "nodeagent/errors.h"
#include "nodeagent/evaluation.h"
#include "nodeagent/llm_backend.h"
#include "nodeagent/orchestrator.h"
#include "nodeagent/programs.h"

namespace {

using nodeagent::Task;

constexpr int kExitSolverError = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool UseColor() {
  return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout));
}

std::string Paint(const std::string& text, const char* code) {
  if (!UseColor()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

struct CommonFlags {
  std::string backend = "deterministic";
  std::string endpoint;
  std::string model;
  double temperature = 0;
  std::string credential_env = "OPENAI_API_KEY";
  std::string transcripts;
  int max_retries = 2;
  std::size_t concurrency = 4;
  std::optional<std::size_t> max_supersteps;
  std::size_t workers = 1;
  std::string format = "text";
  std::uint64_t seed = 0;
};

struct InputFlags {
  std::string file;
  bool jsonl = false;
  std::string task;
  bool directed = false;
  bool undirected = false;
  bool weighted = false;
  bool unweighted = false;
  bool master_classify = false;
  bool compose = false;
};

void AddCommonFlags(CLI::App* app, CommonFlags& f) {
  app->add_option("--backend", f.backend, "Agent executor: deterministic, llm or replay")
      ->check(CLI::IsMember({"deterministic", "llm", "replay"}));
  app->add_option("--endpoint", f.endpoint, "Chat-completion base URL (llm mode)");
  app->add_option("--model", f.model, "Model name (llm mode)");
  app->add_option("--temperature", f.temperature, "Sampling temperature");
  app->add_option("--credential-env", f.credential_env,
                  "Environment variable holding the bearer credential");
  app->add_option("--transcripts", f.transcripts,
                  "Transcript directory (recorded in llm mode, served in replay mode)");
  app->add_option("--max-retries", f.max_retries, "Retries after an unparseable reply");
  app->add_option("--concurrency", f.concurrency, "Concurrent endpoint calls per superstep");
  app->add_option("--max-supersteps", f.max_supersteps, "Superstep cap")
      ->check(CLI::PositiveNumber);
  app->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--format", f.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app->add_option("--seed", f.seed, "Seed for generation and scheduling");
}

void AddInputFlags(CLI::App* app, InputFlags& f) {
  app->add_option("--file,file", f.file, "Problem text file; '-' or absent reads stdin");
  app->add_flag("--jsonl", f.jsonl, "Input is JSON lines {id, text, task_hint?}");
  app->add_option("--task", f.task, "Skip classification and use this task");
  auto* d = app->add_flag("--directed", f.directed, "Treat edges as directed");
  auto* u = app->add_flag("--undirected", f.undirected, "Treat edges as undirected");
  d->excludes(u);
  auto* w = app->add_flag("--weighted", f.weighted, "Edge tuples carry a weight");
  auto* uw = app->add_flag("--unweighted", f.unweighted, "Edge tuples carry no weight");
  w->excludes(uw);
  app->add_flag("--master-classify", f.master_classify,
                "Let the chat model pick the template (llm mode)");
  app->add_flag("--compose", f.compose,
                "Ask the chat model to draft an algorithm when no template fits (llm mode)");
}

nodeagent::BackendOptions BackendOptionsFrom(const CommonFlags& f) {
  nodeagent::BackendOptions o;
  o.mode = *nodeagent::ParseBackendMode(f.backend);
  o.endpoint = f.endpoint;
  o.model = f.model;
  o.temperature = f.temperature;
  o.credential_env = f.credential_env;
  o.max_retries = f.max_retries;
  o.concurrency = f.concurrency;
  if (!f.transcripts.empty()) o.transcript_dir = f.transcripts;
  if (o.mode == nodeagent::BackendMode::kLlm && o.endpoint.empty()) {
    throw UsageError("--backend llm requires --endpoint");
  }
  if (o.mode == nodeagent::BackendMode::kReplay && !o.transcript_dir) {
    throw UsageError("--backend replay requires --transcripts");
  }
  return o;
}

nodeagent::EngineConfig EngineConfigFrom(const CommonFlags& f) {
  nodeagent::EngineConfig c;
  c.max_supersteps = f.max_supersteps;
  c.workers = f.workers;
  c.schedule_seed = f.seed;
  return c;
}

nodeagent::SolveOptions SolveOptionsFrom(const InputFlags& in, const CommonFlags& f) {
  nodeagent::SolveOptions o;
  if (!in.task.empty()) {
    auto t = nodeagent::ParseTaskName(in.task);
    if (!t) throw UsageError("unknown task '" + in.task + "'");
    o.classify.task_hint = t;
  }
  if (in.directed) o.classify.directed = true;
  if (in.undirected) o.classify.directed = false;
  if (in.weighted) o.classify.weighted = true;
  if (in.unweighted) o.classify.weighted = false;
  if (in.master_classify || in.compose) {
    if (f.backend != "llm") throw UsageError("--master-classify and --compose need --backend llm");
    const char* key = std::getenv(f.credential_env.c_str());
    if (!key) throw UsageError("environment variable " + f.credential_env + " is not set");
    o.master.transport = std::make_shared<nodeagent::HttpChatTransport>(f.endpoint, key);
    o.master.model = f.model;
    o.master.temperature = f.temperature;
    o.master.llm_classify = in.master_classify;
    o.master.compose_when_unmatched = in.compose;
  }
  return o;
}

std::string ReadInput(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Problem {
  std::string id;
  std::string text;
  std::optional<Task> hint;
};

std::vector<Problem> ReadProblems(const InputFlags& in) {
  std::string data = ReadInput(in.file);
  if (!in.jsonl) return {{"0", data, std::nullopt}};
  std::vector<Problem> out;
  std::istringstream lines(data);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text")) {
      throw UsageError("line " + std::to_string(n + 1) + " is not {id, text, task_hint?}");
    }
    Problem p;
    p.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>()
                                                   : j["id"].dump())
                            : std::to_string(n);
    p.text = j["text"].get<std::string>();
    if (j.contains("task_hint") && j["task_hint"].is_string()) {
      p.hint = nodeagent::ParseTaskName(j["task_hint"].get<std::string>());
    }
    out.push_back(std::move(p));
    ++n;
  }
  return out;
}

void PrintError(const std::string& id, const std::exception& e, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["error"] = e.what();
    if (const auto* err = dynamic_cast<const nodeagent::Error*>(&e)) {
      j["code"] = std::string(nodeagent::ErrorCodeName(err->code()));
      j["stage"] = err->stage();
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cerr << Paint("error", "31") << ": " << e.what() << "\n";
  }
}

int RunSolve(const InputFlags& in, const CommonFlags& f, bool trace) {
  auto problems = ReadProblems(in);
  auto backend = nodeagent::MakeBackend(BackendOptionsFrom(f));
  auto config = EngineConfigFrom(f);
  config.trace_enabled = trace;
  auto options = SolveOptionsFrom(in, f);
  int status = 0;
  for (const Problem& p : problems) {
    auto opts = options;
    if (p.hint && !opts.classify.task_hint) opts.classify.task_hint = p.hint;
    try {
      nodeagent::Solution s = nodeagent::Solve(p.text, *backend, config, opts);
      if (trace) {
        std::cout << nodeagent::RenderTrace(s.run);
        if (s.flow) {
          std::cout << "Augmenting paths: " << s.flow->augmentations << "\n";
        }
        std::cout << s.answer.narrative << "\n";
      } else if (f.format == "json") {
        std::cout << nodeagent::SolutionToJson(s, p.id) << "\n";
      } else {
        if (problems.size() > 1) std::cout << p.id << ": ";
        std::cout << s.answer.narrative << "\n";
        if (s.composed_algorithm) std::cout << *s.composed_algorithm << "\n";
      }
    } catch (const nodeagent::Error& e) {
      PrintError(p.id, e, f.format);
      status = kExitSolverError;
    }
  }
  return status;
}

std::vector<std::size_t> ParseSizes(const std::string& spec) {
  std::vector<std::size_t> sizes;
  std::stringstream items(spec);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    try {
      auto dots = item.find("..");
      if (dots == std::string::npos) {
        sizes.push_back(std::stoul(item));
        continue;
      }
      std::size_t lo = std::stoul(item.substr(0, dots));
      std::string rest = item.substr(dots + 2);
      std::size_t step = 1;
      if (auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stoul(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      std::size_t hi = std::stoul(rest);
      if (step == 0 || hi < lo) throw UsageError("bad size range '" + item + "'");
      for (std::size_t s = lo; s <= hi; s += step) sizes.push_back(s);
    } catch (const std::logic_error&) {
      throw UsageError("bad size '" + item + "'");
    }
  }
  return sizes;
}

struct BenchFlags {
  std::string task;
  std::size_t count = 0;
  std::string sizes;
  std::string csv;
  std::string size_csv;
  std::string jsonl;
  bool allow_large = false;
};

int RunBench(const BenchFlags& b, const CommonFlags& f) {
  auto task = nodeagent::ParseTaskName(b.task);
  if (!task) throw UsageError("unknown task '" + b.task + "'");
  nodeagent::SuiteConfig config;
  config.task = *task;
  config.count = b.count;
  config.sizes = ParseSizes(b.sizes);
  config.seed = f.seed;
  config.workers = f.workers;
  config.generator.allow_large = b.allow_large;
  config.engine.max_supersteps = f.max_supersteps;
  auto backend_options = BackendOptionsFrom(f);
  config.backend = [backend_options] { return nodeagent::MakeBackend(backend_options); };

  if (!b.jsonl.empty()) {
    std::ofstream out(b.jsonl);
    if (!out) throw UsageError("cannot write " + b.jsonl);
    std::vector<std::size_t> sizes = config.sizes;
    if (sizes.empty()) {
      auto r = nodeagent::TaskNodeRange(*task);
      for (std::size_t s = r.min; s <= r.max; ++s) sizes.push_back(s);
    }
    for (std::size_t i = 0; i < b.count; ++i) {
      nodeagent::WriteInstanceJsonl(
          nodeagent::GenerateInstance(*task, sizes[i % sizes.size()],
                                      nodeagent::InstanceSeed(f.seed, i), config.generator),
          out);
    }
  }

  nodeagent::SuiteReport report = nodeagent::RunSuite(config);
  if (!b.csv.empty()) {
    std::ofstream out(b.csv);
    if (!out) throw UsageError("cannot write " + b.csv);
    nodeagent::WriteSuiteCsv(report, out);
  }
  if (!b.size_csv.empty()) {
    std::ofstream out(b.size_csv);
    if (!out) throw UsageError("cannot write " + b.size_csv);
    nodeagent::WriteAccuracyBySizeCsv(report, out);
  }
  if (f.format == "json") {
    nlohmann::ordered_json j;
    j["task"] = std::string(nodeagent::TaskName(report.task));
    j["total"] = report.total;
    j["correct"] = report.correct;
    j["accuracy"] = report.accuracy;
    nlohmann::ordered_json by_size = nlohmann::ordered_json::object();
    for (const auto& [size, bucket] : report.by_size) {
      by_size[std::to_string(size)] = {{"total", bucket.total}, {"correct", bucket.correct}};
    }
    j["by_size"] = by_size;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& r : report.failures) {
      failures.push_back({{"size", r.size}, {"seed", r.seed}, {"expected", r.expected},
                          {"got", r.got}, {"error", r.error}});
    }
    j["failures"] = failures;
    std::cout << j.dump() << "\n";
  } else {
    std::ostringstream acc;
    acc << nodeagent::FormatReal(report.accuracy);
    std::cout << nodeagent::TaskName(report.task) << ": " << report.correct << "/"
              << report.total << " correct, accuracy "
              << Paint(acc.str(), report.correct == report.total ? "32" : "33") << "\n";
    for (const auto& r : report.failures) {
      std::cout << "  size " << r.size << " seed " << r.seed << ": expected " << r.expected
                << ", got " << r.got;
      if (!r.error.empty()) std::cout << " (" << r.error << ")";
      std::cout << "\n";
    }
  }
  return 0;
}

int RunTemplates(const std::string& name, const std::string& format) {
  auto library = nodeagent::AlgorithmLibrary();
  if (!name.empty()) {
    for (const auto& t : library) {
      if (t.name == name) {
        if (format == "json") {
          nlohmann::ordered_json j{{"name", t.name}, {"description", t.description},
                                   {"document", t.document}};
          std::cout << j.dump() << "\n";
        } else {
          std::cout << t.document;
        }
        return 0;
      }
    }
    throw UsageError("no template named '" + name + "'");
  }
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : library) arr.push_back({{"name", t.name}, {"description", t.description}});
    std::cout << arr.dump() << "\n";
  } else {
    for (const auto& t : library) std::cout << t.name << "  " << t.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-centric graph reasoning with node agents"};
  app.require_subcommand(1);

  CommonFlags solve_flags, trace_flags, bench_flags;
  InputFlags solve_in, trace_in;
  BenchFlags bench;
  std::string template_name, template_format = "text";

  auto* solve = app.add_subcommand("solve", "Solve one problem (or a JSON-lines batch)");
  AddCommonFlags(solve, solve_flags);
  AddInputFlags(solve, solve_in);

  auto* trace = app.add_subcommand("trace", "Print the round-by-round execution log");
  AddCommonFlags(trace, trace_flags);
  AddInputFlags(trace, trace_in);

  auto* bench_cmd = app.add_subcommand("bench", "Score generated instances against oracles");
  AddCommonFlags(bench_cmd, bench_flags);
  bench_cmd->add_option("--task", bench.task, "Task family")->required();
  bench_cmd->add_option("--count", bench.count, "Number of instances")->required();
  bench_cmd->add_option("--sizes", bench.sizes,
                        "Node counts: '5,10,20', '2..100' or '5..100:5' (default: task range)");
  bench_cmd->add_option("--csv", bench.csv, "Per-instance CSV report");
  bench_cmd->add_option("--size-csv", bench.size_csv, "Accuracy-by-size CSV");
  bench_cmd->add_option("--jsonl", bench.jsonl, "Dump generated instances as JSON lines");
  bench_cmd->add_flag("--allow-large", bench.allow_large,
                      "Allow shortest-path sizes above the standard range");

  auto* templates = app.add_subcommand("templates", "List or print library templates");
  templates->add_option("name", template_name, "Template to print");
  templates->add_option("--format", template_format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) return RunSolve(solve_in, solve_flags, false);
    if (*trace) return RunSolve(trace_in, trace_flags, true);
    if (*bench_cmd) return RunBench(bench, bench_flags);
    if (*templates) return RunTemplates(template_name, template_format);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nodeagent::Error& e) {
    std::cerr << Paint("error", "31") << ": " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << Paint("error", "31") << ": " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitUsage;
}
