// SPDX-License-Identifier: Apache-2.0
#include "rerisk/engine.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "hash.hpp"

namespace rerisk {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void request_error(ErrorCode code, const std::string& field, const std::string& msg,
                                std::vector<std::string> suggestions = {}) {
  throw Error(code, msg, {}, field, std::move(suggestions));
}

Thresholds parse_thresholds(const json& value, Thresholds defaults) {
  if (!value.is_object()) request_error(ErrorCode::InvalidThresholds, "thresholds", "expected an object");
  for (const auto& [key, v] : value.items()) {
    if (key != "low_max" && key != "high_min") {
      request_error(ErrorCode::InvalidArgument, "thresholds." + key, "unknown member '" + key + "'");
    }
    if (!v.is_number()) {
      request_error(ErrorCode::InvalidThresholds, "thresholds." + key, "expected a number");
    }
    (key == "low_max" ? defaults.low_max : defaults.high_min) = v.get<double>();
  }
  try {
    defaults.validate();
  } catch (const Error& e) {
    request_error(ErrorCode::InvalidThresholds, "thresholds", e.what());
  }
  return defaults;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '+') {
      out.push_back(' ');
      continue;
    }
    if (c == '%' && i + 2 < text.size()) {
      const int hi = hex_digit(text[i + 1]);
      const int lo = hex_digit(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::multimap<std::string, std::string> parse_query(std::string_view query) {
  std::multimap<std::string, std::string> out;
  std::size_t start = 0;
  while (start < query.size()) {
    const std::size_t end = std::min(query.find('&', start), query.size());
    const std::string_view pair = query.substr(start, end - start);
    const std::size_t eq = pair.find('=');
    if (!pair.empty()) {
      out.emplace(percent_decode(pair.substr(0, eq)),
                  eq == std::string_view::npos ? std::string() : percent_decode(pair.substr(eq + 1)));
    }
    start = end + 1;
  }
  return out;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InconsistentEvidence: return 409;
    case ErrorCode::MalformedInput:
    case ErrorCode::UnknownPhenomenonId:
    case ErrorCode::UnknownNodeId:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidThresholds:
    case ErrorCode::KindMismatch: return 400;
    default: return 500;
  }
}

HttpResponse json_response(int status, std::string body) { return HttpResponse{status, std::move(body)}; }

BayesNet load_or_learn(const Dataset& dataset, const LearnConfig& config,
                       const std::filesystem::path& cache_dir, const std::string& dataset_hash,
                       bool& cache_hit) {
  cache_hit = false;
  if (cache_dir.empty()) return learn_network(dataset, config);
  const std::filesystem::path path = net_cache_path(cache_dir, dataset_hash, config);
  const std::string config_hash = detail::sha256_hex(config.to_json());
  if (std::ifstream in{path, std::ios::binary}) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      const json doc = json::parse(buffer.str());
      if (doc.at("dataset_hash") == dataset_hash && doc.at("config_hash") == config_hash) {
        BayesNet net = parse_net(doc.at("net").dump());
        validate_dag(net);
        cache_hit = true;
        return net;
      }
    } catch (const std::exception&) {
      // unreadable or stale entry: relearn and overwrite
    }
  }
  BayesNet net = learn_network(dataset, config);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  ordered_json doc;
  doc["format"] = "rerisk-net-cache/1";
  doc["dataset_hash"] = dataset_hash;
  doc["config_hash"] = config_hash;
  doc["config"] = json::parse(config.to_json());
  doc["net"] = ordered_json::parse(serialize_net(net));
  const std::filesystem::path tmp =
      path.string() + ".tmp" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
    out << doc.dump() << "\n";
    if (!out) return net;  // cache is best effort
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
  return net;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::vector<std::string> closest_matches(std::string_view id,
                                         const std::vector<std::string>& candidates,
                                         std::size_t limit) {
  const std::size_t cutoff = std::max<std::size_t>(3, id.size() / 3);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const std::string& c : candidates) {
    const std::size_t d = edit_distance(id, c);
    const bool contains = !id.empty() && c.find(id) != std::string::npos;
    if (d <= cutoff || contains) scored.emplace_back(contains ? std::min(d, cutoff) : d, c);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(limit, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

std::string error_json(const Error& error) {
  ordered_json inner;
  inner["code"] = to_string(error.code());
  inner["message"] = error.what();
  if (!error.field().empty()) inner["field"] = error.field();
  if (!error.record_id().empty()) inner["record_id"] = error.record_id();
  if (!error.details().empty()) {
    inner[error.code() == ErrorCode::CycleDetected ? "cycle" : "suggestions"] = error.details();
  }
  ordered_json doc;
  doc["error"] = std::move(inner);
  return doc.dump();
}

AssessRequest parse_assess_request(std::string_view text, const Catalog& catalog) {
  AssessRequest request;
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; });
  if (blank) return request;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    request_error(ErrorCode::MalformedInput, "body", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) request_error(ErrorCode::MalformedInput, "body", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "context") {
      if (value.is_null()) continue;
      if (!value.is_object()) request_error(ErrorCode::InvalidArgument, "context", "expected an object");
      for (const auto& [factor, state] : value.items()) {
        const std::string field = "context." + factor;
        const auto& factors = context_factor_ids();
        if (std::find(factors.begin(), factors.end(), factor) == factors.end()) {
          request_error(ErrorCode::InvalidArgument, field, "unknown context factor '" + factor + "'",
                        closest_matches(factor, factors));
        }
        if (state.is_null()) continue;
        if (!state.is_string()) request_error(ErrorCode::InvalidArgument, field, "expected a string");
        try {
          request.context.set(factor, state.get<std::string>());
        } catch (const Error&) {
          request_error(ErrorCode::InvalidArgument, field,
                        "invalid value '" + state.get<std::string>() + "' for " + factor,
                        context_factor_states(factor));
        }
      }
    } else if (key == "observed") {
      if (value.is_null()) continue;
      if (!value.is_array()) request_error(ErrorCode::InvalidArgument, "observed", "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string field = "observed[" + std::to_string(i) + "]";
        if (!value[i].is_string()) request_error(ErrorCode::InvalidArgument, field, "expected a string id");
        const std::string id = value[i].get<std::string>();
        if (!catalog.contains(id)) {
          request_error(ErrorCode::UnknownPhenomenonId, field, "unknown phenomenon id '" + id + "'",
                        closest_matches(id, catalog.all_ids()));
        }
        request.observed.insert(id);
      }
    } else if (key == "thresholds") {
      if (!value.is_null()) request.thresholds = parse_thresholds(value, Thresholds{});
    } else {
      request_error(ErrorCode::InvalidArgument, key, "unknown member '" + key + "'");
    }
  }
  return request;
}

std::filesystem::path net_cache_path(const std::filesystem::path& dir, std::string_view dataset_hash,
                                     const LearnConfig& config) {
  const std::string config_hash = detail::sha256_hex(config.to_json());
  return dir / ("net-" + std::string(dataset_hash.substr(0, 16)) + "-" + config_hash.substr(0, 16) +
                ".json");
}

Engine::Engine(Dataset dataset, LearnConfig config, const std::filesystem::path& cache_dir,
               Thresholds thresholds)
    : dataset_(std::move(dataset)),
      graph_(build_graph(dataset_)),
      config_(std::move(config)),
      thresholds_(thresholds),
      dataset_hash_(rerisk::dataset_hash(dataset_)) {
  thresholds_.validate();
  net_ = load_or_learn(dataset_, config_, cache_dir, dataset_hash_, cache_hit_);
}

RiskReport Engine::assess(const AssessRequest& request) const {
  AssessOptions options;
  options.thresholds = request.thresholds.value_or(thresholds_);
  options.dataset_hash = dataset_hash_;
  return rerisk::assess(net_, dataset_, graph_, request.context, request.observed, options);
}

std::string Engine::assess_json_request(std::string_view request_json, ReportFormat format) const {
  return render_report(assess(parse_assess_request(request_json, dataset_.catalog())), format);
}

std::string Engine::phenomena_json() const {
  ordered_json doc;
  doc["phenomena"] = ordered_json::parse(serialize_catalog_json(dataset_.catalog()));
  return doc.dump(2) + "\n";
}

std::string Engine::context_options_json() const {
  ordered_json factors = ordered_json::object();
  for (const std::string& factor : context_factor_ids()) factors[factor] = context_factor_states(factor);
  ordered_json doc;
  doc["context_factors"] = std::move(factors);
  return doc.dump(2) + "\n";
}

std::string Engine::graph_export(const std::set<std::string>& highlight, GraphFormat format) const {
  return export_graph(graph_, highlight, format);
}

HttpResponse Engine::handle(std::string_view method, std::string_view path, std::string_view query,
                            std::string_view body) const {
  const auto method_not_allowed = [] {
    return json_response(405, R"({"error":{"code":"MethodNotAllowed","message":"method not allowed"}})");
  };
  try {
    if (path == "/api/health") {
      if (method != "GET") return method_not_allowed();
      return json_response(200, R"({"status":"ok"})");
    }
    if (path == "/api/phenomena") {
      if (method != "GET") return method_not_allowed();
      return json_response(200, phenomena_json());
    }
    if (path == "/api/context-options") {
      if (method != "GET") return method_not_allowed();
      return json_response(200, context_options_json());
    }
    if (path == "/api/assess") {
      if (method != "POST") return method_not_allowed();
      return json_response(200, assess_json_request(body, ReportFormat::Json));
    }
    if (path == "/api/graph") {
      if (method != "GET") return method_not_allowed();
      std::set<std::string> highlight;
      std::size_t k = 0;
      const auto params = parse_query(query);
      const auto range = params.equal_range("highlight");
      for (auto it = range.first; it != range.second; ++it) {
        std::stringstream items(it->second);
        for (std::string id; std::getline(items, id, ',');) {
          if (id.empty()) continue;
          if (!graph_.contains(id)) {
            std::vector<std::string> ids;
            for (const GraphNode& n : graph_.nodes()) ids.push_back(n.id);
            request_error(ErrorCode::UnknownPhenomenonId, "highlight[" + std::to_string(k) + "]",
                          "unknown phenomenon id '" + id + "'", closest_matches(id, ids));
          }
          highlight.insert(id);
          ++k;
        }
      }
      return json_response(200, graph_export(highlight, GraphFormat::Json));
    }
    return json_response(404, R"({"error":{"code":"NotFound","message":"no such endpoint"}})");
  } catch (const Error& e) {
    return json_response(status_for(e.code()), error_json(e));
  } catch (const std::exception& e) {
    return json_response(500, error_json(Error(ErrorCode::InvalidArgument, e.what())));
  }
}

}  // namespace rerisk
