// SPDX-License-Identifier: Apache-2.0
// Links only the shared library and its C header.
#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "rerisk/rerisk.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  rerisk_string_free(s);
  return out;
}

rerisk_dataset* load_fixture() {
  rerisk_dataset* ds = nullptr;
  EXPECT_EQ(rerisk_dataset_load_file(RERISK_FIXTURE, RERISK_FORMAT_JSON, nullptr, &ds), RERISK_OK);
  return ds;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(rerisk_version(), "0.1.0");
  EXPECT_STREQ(rerisk_status_name(RERISK_OK), "Ok");
  EXPECT_STREQ(rerisk_status_name(RERISK_ERR_DUPLICATE_RANK), "DuplicateRank");
  EXPECT_STREQ(rerisk_status_name(RERISK_ERR_IO), "Io");
}

TEST(CApi, DatasetRoundTrip) {
  rerisk_dataset* ds = load_fixture();
  ASSERT_NE(ds, nullptr);
  EXPECT_EQ(rerisk_dataset_record_count(ds), 228u);
  char* out = nullptr;
  ASSERT_EQ(rerisk_dataset_serialize(ds, RERISK_FORMAT_JSON, &out), RERISK_OK);
  const std::string text = take(out);
  std::ifstream in(RERISK_FIXTURE, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(text, buf.str());

  rerisk_dataset* again = nullptr;
  ASSERT_EQ(rerisk_dataset_load(text.data(), text.size(), RERISK_FORMAT_JSON, nullptr, &again), RERISK_OK);
  char* h1 = nullptr;
  char* h2 = nullptr;
  ASSERT_EQ(rerisk_dataset_hash(ds, &h1), RERISK_OK);
  ASSERT_EQ(rerisk_dataset_hash(again, &h2), RERISK_OK);
  const std::string hash = take(h1);
  EXPECT_EQ(hash.size(), 64u);
  EXPECT_EQ(hash, take(h2));

  ASSERT_EQ(rerisk_dataset_summary(ds, RERISK_FORMAT_JSON, &out), RERISK_OK);
  EXPECT_EQ(json::parse(take(out))["n"], 228);
  ASSERT_EQ(rerisk_dataset_summary(ds, RERISK_FORMAT_TEXT, &out), RERISK_OK);
  EXPECT_EQ(take(out).rfind("records: 228", 0), 0u);
  EXPECT_EQ(rerisk_dataset_summary(ds, RERISK_FORMAT_DOT, &out), RERISK_ERR_INVALID_ARGUMENT);

  const char* hl[] = {"time-overrun"};
  ASSERT_EQ(rerisk_dataset_graph(ds, hl, 1, RERISK_FORMAT_DOT, &out), RERISK_OK);
  EXPECT_EQ(take(out).rfind("digraph", 0), 0u);
  rerisk_dataset_free(again);
  rerisk_dataset_free(ds);
}

TEST(CApi, ErrorsCarryCodeAndJson) {
  rerisk_dataset* ds = nullptr;
  const std::string bad = R"({"catalog":[],"records":[{}]})";
  const rerisk_status st = rerisk_dataset_load(bad.data(), bad.size(), RERISK_FORMAT_JSON, nullptr, &ds);
  EXPECT_EQ(st, RERISK_ERR_MALFORMED_INPUT);
  EXPECT_EQ(ds, nullptr);
  EXPECT_NE(std::string(rerisk_last_error()).size(), 0u);
  EXPECT_EQ(json::parse(rerisk_last_error_json())["error"]["code"], "MalformedInput");

  EXPECT_EQ(rerisk_dataset_load_file("/nonexistent/file.json", RERISK_FORMAT_JSON, nullptr, &ds),
            RERISK_ERR_IO);
  EXPECT_EQ(rerisk_dataset_load("a,b", 3, RERISK_FORMAT_CSV, nullptr, &ds), RERISK_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rerisk_dataset_load(nullptr, 0, RERISK_FORMAT_JSON, nullptr, nullptr), RERISK_ERR_INVALID_ARGUMENT);
}

TEST(CApi, EngineAssessAndHttp) {
  rerisk_dataset* ds = load_fixture();
  rerisk_engine* engine = nullptr;
  ASSERT_EQ(rerisk_engine_create(ds, nullptr, nullptr, nullptr, &engine), RERISK_OK);
  rerisk_dataset_free(ds);  // the engine keeps its own copy
  EXPECT_EQ(rerisk_engine_cache_hit(engine), 0);

  char* out = nullptr;
  ASSERT_EQ(rerisk_engine_assess(engine, nullptr, RERISK_FORMAT_JSON, &out), RERISK_OK);
  const std::string report = take(out);
  EXPECT_EQ(json::parse(report)["body"]["items"].size(), 10u);

  int status = 0;
  ASSERT_EQ(rerisk_engine_handle_http(engine, "POST", "/api/assess", "", "{}", &status, &out), RERISK_OK);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(take(out), report);

  ASSERT_EQ(rerisk_engine_handle_http(engine, "POST", "/api/assess", "", R"({"observed":["bogus"]})",
                                      &status, &out),
            RERISK_OK);
  EXPECT_EQ(status, 400);
  EXPECT_EQ(json::parse(take(out))["error"]["field"], "observed[0]");

  EXPECT_EQ(rerisk_engine_assess(engine, R"({"observed":["bogus"]})", RERISK_FORMAT_JSON, &out),
            RERISK_ERR_UNKNOWN_PHENOMENON);
  EXPECT_EQ(json::parse(rerisk_last_error_json())["error"]["field"], "observed[0]");

  ASSERT_EQ(rerisk_engine_net_json(engine, &out), RERISK_OK);
  EXPECT_EQ(json::parse(take(out))["format"], "rerisk-net/1");
  rerisk_engine_free(engine);
}

TEST(CApi, EngineConfigValidation) {
  rerisk_dataset* ds = load_fixture();
  rerisk_engine* engine = nullptr;
  EXPECT_EQ(rerisk_engine_create(ds, R"({"smoothing_alpha":-1})", nullptr, nullptr, &engine),
            RERISK_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rerisk_engine_create(ds, nullptr, R"({"low_max":0.3,"high_min":0.1})", nullptr, &engine),
            RERISK_ERR_INVALID_THRESHOLDS);
  EXPECT_EQ(engine, nullptr);
  rerisk_dataset_free(ds);
}

TEST(CApi, Server) {
  rerisk_dataset* ds = load_fixture();
  rerisk_engine* engine = nullptr;
  ASSERT_EQ(rerisk_engine_create(ds, nullptr, nullptr, nullptr, &engine), RERISK_OK);
  rerisk_server* server = nullptr;
  ASSERT_EQ(rerisk_server_start(engine, "127.0.0.1", 0, nullptr, &server), RERISK_OK);
  EXPECT_GT(rerisk_server_port(server), 0);
  rerisk_server_stop(server);
  rerisk_server_free(server);
  rerisk_engine_free(engine);
  rerisk_dataset_free(ds);
}
