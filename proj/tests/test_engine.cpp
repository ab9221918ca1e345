// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "rerisk/engine.hpp"
#include "testing.hpp"

using namespace rerisk;
using nlohmann::json;
using rerisk::testing::fixture;
using rerisk::testing::TempDir;

namespace {

const Engine& engine() {
  static const Engine e(fixture(), {});
  return e;
}

Error request_error(std::string_view body) {
  try {
    parse_assess_request(body, fixture().catalog());
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << body;
  return Error(ErrorCode::Io, "unreachable");
}

}  // namespace

TEST(EditDistance, Basics) {
  EXPECT_EQ(edit_distance("", ""), 0u);
  EXPECT_EQ(edit_distance("abc", ""), 3u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("flaw", "lawn"), 2u);
  EXPECT_EQ(edit_distance("same", "same"), 0u);
}

TEST(ClosestMatches, RanksByDistance) {
  const std::vector<std::string> ids = {"time-overrun", "time-overruns", "unrelated-thing"};
  EXPECT_EQ(closest_matches("time-overun", ids), (std::vector<std::string>{"time-overrun", "time-overruns"}));
  EXPECT_TRUE(closest_matches("zzzzzzzzzzzzzzzzzzz", ids).empty());
}

TEST(AssessRequest, ParsesEveryMember) {
  const AssessRequest r = parse_assess_request(
      R"({"context": {"process_paradigm": "Agile", "distribution": null},
          "observed": ["language-barriers", "language-barriers"],
          "thresholds": {"low_max": 0.1}})",
      fixture().catalog());
  EXPECT_EQ(r.context.process_paradigm, ProcessParadigm::Agile);
  EXPECT_FALSE(r.context.distribution);
  EXPECT_EQ(r.observed, (std::set<std::string>{"language-barriers"}));
  ASSERT_TRUE(r.thresholds);
  EXPECT_EQ(*r.thresholds, (Thresholds{0.1, 0.20}));
  const AssessRequest empty = parse_assess_request("  ", fixture().catalog());
  EXPECT_TRUE(empty.context.empty());
  EXPECT_TRUE(empty.observed.empty());
  EXPECT_FALSE(empty.thresholds);
}

TEST(AssessRequest, ErrorsNameTheMember) {
  Error e = request_error(R"({"observed": ["language-barrier"]})");
  EXPECT_EQ(e.code(), ErrorCode::UnknownPhenomenonId);
  EXPECT_EQ(e.field(), "observed[0]");
  ASSERT_FALSE(e.details().empty());
  EXPECT_EQ(e.details().front(), "language-barriers");

  e = request_error(R"({"context": {"process_paradigm": "agile"}})");
  EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  EXPECT_EQ(e.field(), "context.process_paradigm");
  EXPECT_EQ(e.details(), context_factor_states("process_paradigm"));

  EXPECT_EQ(request_error(R"({"context": {"size": "Small"}})").field(), "context.size");
  EXPECT_EQ(request_error(R"({"observed": [3]})").field(), "observed[0]");
  EXPECT_EQ(request_error(R"({"observed": "x"})").field(), "observed");
  EXPECT_EQ(request_error(R"({"extra": 1})").field(), "extra");
  EXPECT_EQ(request_error("{").code(), ErrorCode::MalformedInput);
  EXPECT_EQ(request_error("[]").code(), ErrorCode::MalformedInput);
  e = request_error(R"({"thresholds": {"low_max": 0.5, "high_min": 0.1}})");
  EXPECT_EQ(e.code(), ErrorCode::InvalidThresholds);
}

TEST(ErrorJson, Shape) {
  const json doc = json::parse(error_json(Error(ErrorCode::UnknownPhenomenonId, "nope", "r1",
                                                "observed[0]", {"a", "b"})));
  EXPECT_EQ(doc["error"]["code"], "UnknownPhenomenonId");
  EXPECT_EQ(doc["error"]["message"], "nope");
  EXPECT_EQ(doc["error"]["field"], "observed[0]");
  EXPECT_EQ(doc["error"]["record_id"], "r1");
  EXPECT_EQ(doc["error"]["suggestions"], json::array({"a", "b"}));
  const json cycle = json::parse(error_json(Error(ErrorCode::CycleDetected, "c", {}, {}, {"A", "B", "A"})));
  EXPECT_EQ(cycle["error"]["cycle"].size(), 3u);
  EXPECT_FALSE(cycle["error"].contains("field"));
}

TEST(Handle, Routes) {
  const Engine& e = engine();
  HttpResponse r = e.handle("GET", "/api/health", "", "");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "ok");

  r = e.handle("GET", "/api/phenomena", "", "");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["phenomena"].size(), fixture().catalog().phenomena().size());

  r = e.handle("GET", "/api/context-options", "", "");
  EXPECT_EQ(r.status, 200);
  const json ctx = json::parse(r.body)["context_factors"];
  EXPECT_EQ(ctx["company_size_band"].size(), 5u);
  EXPECT_EQ(ctx["distribution"].size(), 3u);
  EXPECT_EQ(ctx["process_paradigm"], json::array({"Agile", "PlanDriven", "Hybrid"}));

  EXPECT_EQ(e.handle("GET", "/api/assess", "", "").status, 405);
  EXPECT_EQ(e.handle("POST", "/api/health", "", "").status, 405);
  EXPECT_EQ(e.handle("GET", "/api/nothing", "", "").status, 404);
}

TEST(Handle, Assess) {
  const Engine& e = engine();
  const HttpResponse ok = e.handle("POST", "/api/assess", "", "{}");
  ASSERT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body, render_report(e.assess({}), ReportFormat::Json));
  EXPECT_EQ(json::parse(ok.body)["body"]["items"].size(), 10u);

  const HttpResponse bad = e.handle("POST", "/api/assess", "", R"({"observed":["languag-barriers"]})");
  EXPECT_EQ(bad.status, 400);
  const json err = json::parse(bad.body)["error"];
  EXPECT_EQ(err["code"], "UnknownPhenomenonId");
  EXPECT_EQ(err["field"], "observed[0]");
  EXPECT_EQ(err["suggestions"][0], "language-barriers");

  EXPECT_EQ(e.handle("POST", "/api/assess", "", "not json").status, 400);
  const HttpResponse custom =
      e.handle("POST", "/api/assess", "", R"({"thresholds":{"low_max":0.0,"high_min":0.01}})");
  ASSERT_EQ(custom.status, 200);
  EXPECT_EQ(json::parse(custom.body)["body"]["thresholds"]["high_min"], 0.01);
}

TEST(Handle, GraphHighlight) {
  const Engine& e = engine();
  const HttpResponse r = e.handle("GET", "/api/graph", "highlight=language-barriers%2Ctime-overrun", "");
  ASSERT_EQ(r.status, 200);
  std::set<std::string> flagged;
  EXPECT_EQ(graph_from_json(r.body, &flagged), e.graph());
  EXPECT_EQ(flagged, (std::set<std::string>{"language-barriers", "time-overrun"}));
  const HttpResponse both = e.handle("GET", "/api/graph", "highlight=language-barriers&highlight=time-overrun", "");
  EXPECT_EQ(both.body, r.body);
  const HttpResponse bad = e.handle("GET", "/api/graph", "highlight=nope", "");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(json::parse(bad.body)["error"]["field"], "highlight[0]");
}

TEST(Engine, CacheHitMissAndInvalidation) {
  TempDir dir;
  const Engine first(fixture(), {}, dir.path());
  EXPECT_FALSE(first.loaded_from_cache());
  EXPECT_TRUE(std::filesystem::exists(net_cache_path(dir.path(), first.dataset_hash(), {})));
  const Engine second(fixture(), {}, dir.path());
  EXPECT_TRUE(second.loaded_from_cache());
  EXPECT_EQ(second.net(), first.net());

  LearnConfig other;
  other.max_parents = 2;
  EXPECT_FALSE(Engine(fixture(), other, dir.path()).loaded_from_cache());

  std::vector<SurveyRecord> fewer(fixture().records().begin(), fixture().records().end() - 1);
  EXPECT_FALSE(Engine(Dataset(fixture().catalog(), fewer), {}, dir.path()).loaded_from_cache());

  // A corrupt entry is relearned and rewritten.
  rerisk::testing::write_file(net_cache_path(dir.path(), first.dataset_hash(), {}), "garbage");
  const Engine third(fixture(), {}, dir.path());
  EXPECT_FALSE(third.loaded_from_cache());
  EXPECT_EQ(third.net(), first.net());
  EXPECT_TRUE(Engine(fixture(), {}, dir.path()).loaded_from_cache());
}

TEST(Engine, RejectsBadThresholds) {
  EXPECT_THROW(Engine(fixture(), {}, {}, Thresholds{0.5, 0.1}), Error);
}
