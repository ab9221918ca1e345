// SPDX-License-Identifier: Apache-2.0
//
// rerisk command line: ingest | summarize | assess | graph | serve.
// Talks to the engine only through the C API.
#include <CLI11.hpp>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rerisk/rerisk.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

// Owns a string handed out by the C API.
struct CString {
  char* p = nullptr;
  ~CString() { rerisk_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

// Prints the last C API error as "error: Code: message" plus locator lines.
void report_error(rerisk_status status) {
  std::cerr << "error: " << rerisk_status_name(status) << ": " << rerisk_last_error() << "\n";
  try {
    const auto doc = nlohmann::json::parse(rerisk_last_error_json());
    const auto& e = doc.at("error");
    if (e.contains("record_id")) std::cerr << "  record: " << e["record_id"].get<std::string>() << "\n";
    if (e.contains("field")) std::cerr << "  field: " << e["field"].get<std::string>() << "\n";
    if (e.contains("suggestions")) {
      std::cerr << "  did you mean:";
      for (const auto& s : e["suggestions"]) std::cerr << " " << s.get<std::string>();
      std::cerr << "\n";
    }
    if (e.contains("cycle")) {
      std::cerr << "  cycle:";
      for (const auto& s : e["cycle"]) std::cerr << " " << s.get<std::string>();
      std::cerr << "\n";
    }
  } catch (const std::exception&) {
  }
}

int exit_for(rerisk_status status) {
  report_error(status);
  return status == RERISK_ERR_INTERNAL ? kExitFailure : kExitInput;
}

struct DataOptions {
  std::string path;
  std::string input_format;  // json | csv | "" (by extension)
  std::string catalog;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("dataset", o.path, "Dataset file (default: $RERISK_DATA)");
  cmd->add_option("--input-format", o.input_format, "Dataset format (default: by extension)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--catalog", o.catalog, "Catalog JSON for CSV datasets");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Loads the dataset or prints diagnostics; returns the exit code on failure.
std::optional<int> load(DataOptions o, rerisk_dataset** out) {
  if (o.path.empty()) {
    if (const char* env = std::getenv("RERISK_DATA")) o.path = env;
  }
  if (o.path.empty()) {
    std::cerr << "error: no dataset given (pass a path or set RERISK_DATA)\n";
    return kExitInput;
  }
  std::string fmt = o.input_format;
  if (fmt.empty()) fmt = ends_with(o.path, ".csv") ? "csv" : "json";
  const rerisk_format f = fmt == "csv" ? RERISK_FORMAT_CSV : RERISK_FORMAT_JSON;
  const rerisk_status s =
      rerisk_dataset_load_file(o.path.c_str(), f, o.catalog.empty() ? nullptr : o.catalog.c_str(), out);
  if (s != RERISK_OK) return exit_for(s);
  return std::nullopt;
}

struct Dataset {
  rerisk_dataset* p = nullptr;
  ~Dataset() { rerisk_dataset_free(p); }
};

struct Engine {
  rerisk_engine* p = nullptr;
  ~Engine() { rerisk_engine_free(p); }
};

struct LearnOptions {
  std::optional<unsigned> max_parents;
  std::optional<double> alpha;
  std::string parameterization;
  std::optional<unsigned> noisy_or_above;
  bool no_context_nodes = false;
  std::string cache_dir;
  bool no_cache = false;
};

void add_learn_options(CLI::App* cmd, LearnOptions& o) {
  cmd->add_option("--max-parents", o.max_parents, "Phenomenon parents per node (default 4)");
  cmd->add_option("--alpha", o.alpha, "Additive smoothing (default 1)");
  cmd->add_option("--parameterization", o.parameterization, "auto | cpt | noisy-or")
      ->check(CLI::IsMember({"auto", "cpt", "noisy-or"}));
  cmd->add_option("--noisy-or-above", o.noisy_or_above,
                  "Auto switches to noisy-or above this many parents (default 4)");
  cmd->add_flag("--no-context-nodes", o.no_context_nodes, "Leave context factors out of the net");
  cmd->add_option("--cache-dir", o.cache_dir, "Learned-net cache (default: $RERISK_CACHE_DIR)");
  cmd->add_flag("--no-cache", o.no_cache, "Always learn, never read or write the cache");
}

std::string learn_config_json(const LearnOptions& o) {
  nlohmann::json cfg = nlohmann::json::object();
  if (o.max_parents) cfg["max_parents"] = *o.max_parents;
  if (o.alpha) cfg["smoothing_alpha"] = *o.alpha;
  if (!o.parameterization.empty()) cfg["parameterization"] = o.parameterization;
  if (o.noisy_or_above) cfg["noisy_or_above"] = *o.noisy_or_above;
  if (o.no_context_nodes) cfg["include_context_nodes"] = false;
  return cfg.dump();
}

std::string cache_dir(const LearnOptions& o) {
  if (o.no_cache) return {};
  if (!o.cache_dir.empty()) return o.cache_dir;
  if (const char* env = std::getenv("RERISK_CACHE_DIR")) return env;
  return {};
}

std::optional<int> make_engine(const rerisk_dataset* ds, const LearnOptions& o,
                               const std::string& thresholds, rerisk_engine** out) {
  const std::string cfg = learn_config_json(o);
  const std::string dir = cache_dir(o);
  const rerisk_status s = rerisk_engine_create(ds, cfg.c_str(),
                                               thresholds.empty() ? nullptr : thresholds.c_str(),
                                               dir.empty() ? nullptr : dir.c_str(), out);
  if (s != RERISK_OK) return exit_for(s);
  return std::nullopt;
}

rerisk_format format_of(const std::string& name) {
  if (name == "csv") return RERISK_FORMAT_CSV;
  if (name == "text") return RERISK_FORMAT_TEXT;
  if (name == "dot") return RERISK_FORMAT_DOT;
  return RERISK_FORMAT_JSON;
}

std::vector<std::string> split_ids(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const std::string& a : args) {
    std::size_t start = 0;
    while (start <= a.size()) {
      const std::size_t comma = std::min(a.find(',', start), a.size());
      if (comma > start) out.push_back(a.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Requirements engineering risk assessment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rerisk_version()));

  DataOptions data;

  auto* ingest = app.add_subcommand("ingest", "Validate a dataset");
  add_data_options(ingest, data);

  std::string summary_format = "text";
  auto* summarize = app.add_subcommand("summarize", "Problem frequency table");
  add_data_options(summarize, data);
  summarize->add_option("--format", summary_format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  LearnOptions learn;
  std::vector<std::string> context_args;
  std::vector<std::string> observed_args;
  std::optional<double> low_max;
  std::optional<double> high_min;
  std::string report_format = "text";
  std::string timestamp;
  auto* assess = app.add_subcommand("assess", "Risk report for a project profile");
  add_data_options(assess, data);
  add_learn_options(assess, learn);
  assess->add_option("--context", context_args, "Context factor, e.g. process_paradigm=Agile");
  assess->add_option("--observed", observed_args, "Phenomenon known to apply (repeatable)");
  assess->add_option("--low-max", low_max, "Upper criticality bound of the Low band");
  assess->add_option("--high-min", high_min, "Lower criticality bound of the High band");
  assess->add_option("--format", report_format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  assess->add_option("--timestamp", timestamp, "generated_at value for JSON reports");

  std::vector<std::string> highlight_args;
  std::string graph_format = "dot";
  auto* graph = app.add_subcommand("graph", "Cause-effect graph export");
  add_data_options(graph, data);
  graph->add_option("--highlight", highlight_args, "Phenomenon to highlight (repeatable)");
  graph->add_option("--format", graph_format, "dot | json")->check(CLI::IsMember({"dot", "json"}));

  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string cors;
  auto* serve = app.add_subcommand("serve", "HTTP service for the web console");
  add_data_options(serve, data);
  add_learn_options(serve, learn);
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--cors-origin", cors, "Allowed browser origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  Dataset ds;
  if (auto rc = load(data, &ds.p)) return *rc;

  if (*ingest) {
    std::cout << "records: " << rerisk_dataset_record_count(ds.p) << "\n";
    return kExitOk;
  }

  if (*summarize) {
    CString out;
    const rerisk_status s = rerisk_dataset_summary(ds.p, format_of(summary_format), out.out());
    if (s != RERISK_OK) return exit_for(s);
    std::cout << out.str();
    return kExitOk;
  }

  if (*graph) {
    const std::vector<std::string> ids = split_ids(highlight_args);
    std::vector<const char*> ptrs;
    for (const std::string& id : ids) ptrs.push_back(id.c_str());
    CString out;
    const rerisk_status s =
        rerisk_dataset_graph(ds.p, ptrs.data(), ptrs.size(), format_of(graph_format), out.out());
    if (s != RERISK_OK) return exit_for(s);
    std::cout << out.str();
    return kExitOk;
  }

  if (*assess) {
    nlohmann::ordered_json request = nlohmann::ordered_json::object();
    nlohmann::ordered_json context = nlohmann::ordered_json::object();
    for (const std::string& kv : context_args) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --context expects factor=state, got '" << kv << "'\n";
        return kExitInput;
      }
      context[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!context.empty()) request["context"] = std::move(context);
    const std::vector<std::string> observed = split_ids(observed_args);
    if (!observed.empty()) request["observed"] = observed;
    if (low_max || high_min) {
      nlohmann::ordered_json t;
      t["low_max"] = low_max.value_or(0.05);
      t["high_min"] = high_min.value_or(0.20);
      request["thresholds"] = std::move(t);
    }

    Engine engine;
    if (auto rc = make_engine(ds.p, learn, {}, &engine.p)) return *rc;
    CString out;
    const std::string body = request.dump();
    const rerisk_status s =
        rerisk_engine_assess(engine.p, body.c_str(), format_of(report_format), out.out());
    if (s != RERISK_OK) return exit_for(s);
    if (!timestamp.empty() && report_format == "json") {
      auto doc = nlohmann::ordered_json::parse(out.str());
      doc["generated_at"] = timestamp;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << out.str();
    }
    return kExitOk;
  }

  if (*serve) {
    Engine engine;
    if (auto rc = make_engine(ds.p, learn, {}, &engine.p)) return *rc;

    // Block the stop signals before the server spawns threads so that only
    // sigwait below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    rerisk_server* server = nullptr;
    const rerisk_status s = rerisk_server_start(engine.p, bind.c_str(), port,
                                                cors.empty() ? nullptr : cors.c_str(), &server);
    if (s != RERISK_OK) return exit_for(s);
    std::cout << "listening on http://" << bind << ":" << rerisk_server_port(server) << "/api"
              << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    rerisk_server_free(server);
    return kExitOk;
  }
  return kExitFailure;
}
