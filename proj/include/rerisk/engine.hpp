// SPDX-License-Identifier: Apache-2.0
//
// Pipeline facade shared by the CLI and the HTTP service: one immutable
// (dataset, graph, network) triple answering assess and graph requests.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rerisk/assessment.hpp"
#include "rerisk/bayes_net.hpp"
#include "rerisk/cegraph.hpp"
#include "rerisk/dataset.hpp"
#include "rerisk/learn.hpp"

namespace rerisk {

struct AssessRequest {
  ContextFilter context;
  std::set<std::string> observed;
  std::optional<Thresholds> thresholds;
};

// Parses {"context": {...}, "observed": [...], "thresholds": {...}}; every
// member is optional. Errors name the offending member, e.g. "observed[0]"
// or "context.process_paradigm", and carry closest-match suggestions.
AssessRequest parse_assess_request(std::string_view json, const Catalog& catalog);

// Up to `limit` catalog ids closest to `id` by edit distance.
std::vector<std::string> closest_matches(std::string_view id,
                                         const std::vector<std::string>& candidates,
                                         std::size_t limit = 3);
std::size_t edit_distance(std::string_view a, std::string_view b);

// {"error": {"code", "message", "field"?, "record_id"?, "details"?}}
std::string error_json(const Error& error);

struct HttpResponse {
  int status = 200;
  std::string body;
};

class Engine {
 public:
  // Learns the network, or loads it from `cache_dir` when a cached net for
  // the same (dataset hash, config hash) exists. An empty path disables the
  // cache.
  Engine(Dataset dataset, LearnConfig config, const std::filesystem::path& cache_dir = {},
         Thresholds thresholds = {});

  const Dataset& dataset() const noexcept { return dataset_; }
  const CauseEffectGraph& graph() const noexcept { return graph_; }
  const BayesNet& net() const noexcept { return net_; }
  const LearnConfig& config() const noexcept { return config_; }
  const Thresholds& thresholds() const noexcept { return thresholds_; }
  const std::string& dataset_hash() const noexcept { return dataset_hash_; }
  bool loaded_from_cache() const noexcept { return cache_hit_; }

  RiskReport assess(const AssessRequest& request) const;
  std::string assess_json_request(std::string_view request_json, ReportFormat format) const;

  std::string phenomena_json() const;
  std::string context_options_json() const;
  std::string graph_export(const std::set<std::string>& highlight, GraphFormat format) const;

  // Routes GET /api/health, /api/phenomena, /api/context-options,
  // /api/graph?highlight=a,b and POST /api/assess. `query` is the raw query
  // string without '?'.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view query,
                      std::string_view body) const;

 private:
  Dataset dataset_;
  CauseEffectGraph graph_;
  LearnConfig config_;
  Thresholds thresholds_;
  std::string dataset_hash_;
  BayesNet net_;
  bool cache_hit_ = false;
};

// Cache file for a (dataset hash, learn config) pair inside `dir`.
std::filesystem::path net_cache_path(const std::filesystem::path& dir,
                                     std::string_view dataset_hash, const LearnConfig& config);

}  // namespace rerisk
