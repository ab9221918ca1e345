// SPDX-License-Identifier: Apache-2.0
#include "rerisk/rerisk.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "rerisk/engine.hpp"
#include "rerisk/server.hpp"

struct rerisk_dataset {
  rerisk::Dataset dataset;
};

struct rerisk_engine {
  std::unique_ptr<rerisk::Engine> engine;
};

struct rerisk_server {
  std::unique_ptr<rerisk::Server> server;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

rerisk_status status_of(rerisk::ErrorCode code) {
  return static_cast<rerisk_status>(static_cast<int>(code) + 1);
}

rerisk_status fail(const rerisk::Error& e) {
  g_last_error = e.what();
  g_last_error_json = rerisk::error_json(e);
  return status_of(e.code());
}

rerisk_status fail_internal(const char* what) {
  g_last_error = what;
  nlohmann::ordered_json doc;
  doc["error"] = {{"code", "Internal"}, {"message", what}};
  g_last_error_json = doc.dump();
  return RERISK_ERR_INTERNAL;
}

rerisk_status null_argument(const char* name) {
  return fail(rerisk::Error(rerisk::ErrorCode::InvalidArgument,
                            std::string("argument '") + name + "' must not be NULL", {}, name));
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

template <typename F>
rerisk_status guarded(F&& body) {
  try {
    body();
    return RERISK_OK;
  } catch (const rerisk::Error& e) {
    return fail(e);
  } catch (const std::bad_alloc&) {
    return fail_internal("out of memory");
  } catch (const std::exception& e) {
    return fail_internal(e.what());
  } catch (...) {
    return fail_internal("unknown exception");
  }
}

std::string read_file(const char* path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw rerisk::Error(rerisk::ErrorCode::Io, std::string("cannot open '") + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw rerisk::Error(rerisk::ErrorCode::Io, std::string("cannot read '") + path + "'");
  return buffer.str();
}

rerisk::DataFormat data_format(rerisk_format f) {
  if (f == RERISK_FORMAT_JSON) return rerisk::DataFormat::Json;
  if (f == RERISK_FORMAT_CSV) return rerisk::DataFormat::Csv;
  throw rerisk::Error(rerisk::ErrorCode::InvalidArgument, "dataset format must be JSON or CSV", {},
                      "format");
}

rerisk::GraphFormat graph_format(rerisk_format f) {
  if (f == RERISK_FORMAT_DOT) return rerisk::GraphFormat::Dot;
  if (f == RERISK_FORMAT_JSON) return rerisk::GraphFormat::Json;
  throw rerisk::Error(rerisk::ErrorCode::InvalidArgument, "graph format must be DOT or JSON", {},
                      "format");
}

rerisk::ReportFormat report_format(rerisk_format f) {
  switch (f) {
    case RERISK_FORMAT_JSON: return rerisk::ReportFormat::Json;
    case RERISK_FORMAT_CSV: return rerisk::ReportFormat::Csv;
    case RERISK_FORMAT_TEXT: return rerisk::ReportFormat::Text;
    default: break;
  }
  throw rerisk::Error(rerisk::ErrorCode::InvalidArgument, "report format must be JSON, CSV or TEXT",
                      {}, "format");
}

std::set<std::string> highlight_set(const char* const* ids, std::size_t count) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (ids == nullptr || ids[i] == nullptr) {
      throw rerisk::Error(rerisk::ErrorCode::InvalidArgument, "highlight id must not be NULL", {},
                          "highlight[" + std::to_string(i) + "]");
    }
    out.insert(ids[i]);
  }
  return out;
}

rerisk::Thresholds parse_thresholds(const char* text) {
  rerisk::Thresholds t;
  if (text == nullptr || *text == '\0') return t;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw rerisk::Error(rerisk::ErrorCode::InvalidThresholds,
                        std::string("invalid thresholds JSON: ") + e.what(), {}, "thresholds");
  }
  if (!doc.is_object()) {
    throw rerisk::Error(rerisk::ErrorCode::InvalidThresholds, "thresholds must be an object", {},
                        "thresholds");
  }
  for (const auto& [key, v] : doc.items()) {
    if ((key != "low_max" && key != "high_min") || !v.is_number()) {
      throw rerisk::Error(rerisk::ErrorCode::InvalidThresholds,
                          "unexpected thresholds member '" + key + "'", {}, "thresholds." + key);
    }
    (key == "low_max" ? t.low_max : t.high_min) = v.get<double>();
  }
  t.validate();
  return t;
}

}  // namespace

extern "C" {

const char* rerisk_version(void) { return "0.1.0"; }

const char* rerisk_status_name(rerisk_status status) {
  static thread_local std::string name;
  if (status == RERISK_OK) return "Ok";
  if (status == RERISK_ERR_INTERNAL) return "Internal";
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(rerisk::ErrorCode::Io)) return "Unknown";
  name = std::string(rerisk::to_string(static_cast<rerisk::ErrorCode>(code)));
  return name.c_str();
}

const char* rerisk_last_error(void) { return g_last_error.c_str(); }
const char* rerisk_last_error_json(void) { return g_last_error_json.c_str(); }

void rerisk_string_free(char* str) { std::free(str); }

rerisk_status rerisk_dataset_load(const char* data, size_t size, rerisk_format format,
                                  const char* catalog_json, rerisk_dataset** out) {
  if (out == nullptr) return null_argument("out");
  if (data == nullptr && size > 0) return null_argument("data");
  *out = nullptr;
  return guarded([&] {
    const rerisk::DataFormat f = data_format(format);
    std::optional<rerisk::Catalog> catalog;
    if (catalog_json != nullptr) catalog = rerisk::load_catalog_json(catalog_json);
    auto handle = std::make_unique<rerisk_dataset>();
    handle->dataset = rerisk::load_dataset(std::string_view(data ? data : "", size), f,
                                           catalog ? &*catalog : nullptr);
    *out = handle.release();
  });
}

rerisk_status rerisk_dataset_load_file(const char* path, rerisk_format format,
                                       const char* catalog_path, rerisk_dataset** out) {
  if (out == nullptr) return null_argument("out");
  if (path == nullptr) return null_argument("path");
  *out = nullptr;
  return guarded([&] {
    const rerisk::DataFormat f = data_format(format);
    std::optional<rerisk::Catalog> catalog;
    if (catalog_path != nullptr) catalog = rerisk::load_catalog_json(read_file(catalog_path));
    const std::string text = read_file(path);
    auto handle = std::make_unique<rerisk_dataset>();
    handle->dataset = rerisk::load_dataset(text, f, catalog ? &*catalog : nullptr);
    *out = handle.release();
  });
}

void rerisk_dataset_free(rerisk_dataset* dataset) { delete dataset; }

size_t rerisk_dataset_record_count(const rerisk_dataset* dataset) {
  return dataset ? dataset->dataset.size() : 0;
}

size_t rerisk_dataset_phenomenon_count(const rerisk_dataset* dataset) {
  return dataset ? dataset->dataset.catalog().phenomena().size() : 0;
}

rerisk_status rerisk_dataset_hash(const rerisk_dataset* dataset, char** out) {
  if (dataset == nullptr) return null_argument("dataset");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = copy_out(rerisk::dataset_hash(dataset->dataset)); });
}

rerisk_status rerisk_dataset_summary(const rerisk_dataset* dataset, rerisk_format format,
                                     char** out) {
  if (dataset == nullptr) return null_argument("dataset");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    rerisk::SummaryFormat f;
    switch (format) {
      case RERISK_FORMAT_JSON: f = rerisk::SummaryFormat::Json; break;
      case RERISK_FORMAT_CSV: f = rerisk::SummaryFormat::Csv; break;
      case RERISK_FORMAT_TEXT: f = rerisk::SummaryFormat::Text; break;
      default:
        throw rerisk::Error(rerisk::ErrorCode::InvalidArgument,
                            "summary format must be JSON, CSV or TEXT", {}, "format");
    }
    const rerisk::FrequencyTable table = rerisk::summarize(dataset->dataset);
    *out = copy_out(rerisk::render_summary(table, dataset->dataset.catalog(), f));
  });
}

rerisk_status rerisk_dataset_serialize(const rerisk_dataset* dataset, rerisk_format format,
                                       char** out) {
  if (dataset == nullptr) return null_argument("dataset");
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = copy_out(rerisk::serialize_dataset(dataset->dataset, data_format(format))); });
}

rerisk_status rerisk_dataset_graph(const rerisk_dataset* dataset, const char* const* highlight,
                                   size_t highlight_count, rerisk_format format, char** out) {
  if (dataset == nullptr) return null_argument("dataset");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const rerisk::GraphFormat f = graph_format(format);
    const rerisk::CauseEffectGraph graph = rerisk::build_graph(dataset->dataset);
    *out = copy_out(rerisk::export_graph(graph, highlight_set(highlight, highlight_count), f));
  });
}

rerisk_status rerisk_engine_create(const rerisk_dataset* dataset, const char* learn_config_json,
                                   const char* thresholds_json, const char* cache_dir,
                                   rerisk_engine** out) {
  if (dataset == nullptr) return null_argument("dataset");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    rerisk::LearnConfig config;
    if (learn_config_json != nullptr && *learn_config_json != '\0') {
      config = rerisk::LearnConfig::from_json(learn_config_json);
    }
    const rerisk::Thresholds thresholds = parse_thresholds(thresholds_json);
    auto handle = std::make_unique<rerisk_engine>();
    handle->engine = std::make_unique<rerisk::Engine>(
        dataset->dataset, config,
        cache_dir ? std::filesystem::path(cache_dir) : std::filesystem::path(), thresholds);
    *out = handle.release();
  });
}

void rerisk_engine_free(rerisk_engine* engine) { delete engine; }

int rerisk_engine_cache_hit(const rerisk_engine* engine) {
  return engine && engine->engine->loaded_from_cache() ? 1 : 0;
}

rerisk_status rerisk_engine_net_json(const rerisk_engine* engine, char** out) {
  if (engine == nullptr) return null_argument("engine");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = copy_out(rerisk::serialize_net(engine->engine->net())); });
}

rerisk_status rerisk_engine_assess(const rerisk_engine* engine, const char* request_json,
                                   rerisk_format format, char** out) {
  if (engine == nullptr) return null_argument("engine");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const rerisk::ReportFormat f = report_format(format);
    *out = copy_out(engine->engine->assess_json_request(request_json ? request_json : "", f));
  });
}

rerisk_status rerisk_engine_graph(const rerisk_engine* engine, const char* const* highlight,
                                  size_t highlight_count, rerisk_format format, char** out) {
  if (engine == nullptr) return null_argument("engine");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const rerisk::GraphFormat f = graph_format(format);
    *out = copy_out(engine->engine->graph_export(highlight_set(highlight, highlight_count), f));
  });
}

rerisk_status rerisk_engine_handle_http(const rerisk_engine* engine, const char* method,
                                        const char* path, const char* query, const char* body,
                                        int* http_status, char** out) {
  if (engine == nullptr) return null_argument("engine");
  if (method == nullptr) return null_argument("method");
  if (path == nullptr) return null_argument("path");
  if (http_status == nullptr) return null_argument("http_status");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const rerisk::HttpResponse r =
        engine->engine->handle(method, path, query ? query : "", body ? body : "");
    *http_status = r.status;
    *out = copy_out(r.body);
  });
}

rerisk_status rerisk_server_start(const rerisk_engine* engine, const char* bind_address, int port,
                                  const char* cors_origin, rerisk_server** out) {
  if (engine == nullptr) return null_argument("engine");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    rerisk::ServerConfig config;
    if (bind_address != nullptr) config.bind_address = bind_address;
    config.port = port;
    if (cors_origin != nullptr) config.cors_origin = cors_origin;
    auto handle = std::make_unique<rerisk_server>();
    handle->server = std::make_unique<rerisk::Server>(*engine->engine, config);
    handle->server->start();
    *out = handle.release();
  });
}

int rerisk_server_port(const rerisk_server* server) {
  return server ? server->server->port() : -1;
}

void rerisk_server_wait(rerisk_server* server) {
  if (server) server->server->wait();
}

void rerisk_server_stop(rerisk_server* server) {
  if (server) server->server->stop();
}

void rerisk_server_free(rerisk_server* server) {
  if (server) server->server->stop();
  delete server;
}

}  // extern "C"
