// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <httplib.h>

#include <future>
#include <nlohmann/json.hpp>

#include "rerisk/server.hpp"
#include "testing.hpp"

using namespace rerisk;
using rerisk::testing::fixture;

namespace {

const Engine& engine() {
  static const Engine e(fixture(), {});
  return e;
}

}  // namespace

TEST(Server, ServesApi) {
  Server server(engine(), {"127.0.0.1", 0, ""});
  server.start();
  ASSERT_GT(server.port(), 0);
  httplib::Client client("127.0.0.1", server.port());
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_FALSE(health->has_header("Access-Control-Allow-Origin"));

  auto assess = client.Post("/api/assess", R"({"observed":["language-barriers"]})", "application/json");
  ASSERT_TRUE(assess);
  EXPECT_EQ(assess->status, 200);
  EXPECT_EQ(assess->body, engine().handle("POST", "/api/assess", "", R"({"observed":["language-barriers"]})").body);

  auto graph = client.Get("/api/graph?highlight=time-overrun");
  ASSERT_TRUE(graph);
  EXPECT_EQ(graph->status, 200);
  EXPECT_EQ(graph->body, engine().handle("GET", "/api/graph", "highlight=time-overrun", "").body);

  auto bad = client.Post("/api/assess", R"({"observed":["x"]})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(client.Get("/elsewhere")->status, 404);
  server.stop();
}

TEST(Server, Cors) {
  Server server(engine(), {"127.0.0.1", 0, "http://localhost:5173"});
  server.start();
  httplib::Client client("127.0.0.1", server.port());
  auto res = client.Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  auto pre = client.Options("/api/assess");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
}

TEST(Server, ConcurrentRequestsAgree) {
  Server server(engine(), {"127.0.0.1", 0, ""});
  server.start();
  const int port = server.port();
  const std::string body = R"({"context":{"process_paradigm":"Hybrid"},"observed":["missing-direct-communication-to-customer"]})";
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 16; ++i) {
    futures.push_back(std::async(std::launch::async, [port, &body] {
      httplib::Client client("127.0.0.1", port);
      auto res = client.Post("/api/assess", body, "application/json");
      if (!res) return "failed: " + httplib::to_string(res.error());
      return res->status == 200 ? res->body : "status " + std::to_string(res->status);
    }));
  }
  const std::string expect = engine().handle("POST", "/api/assess", "", body).body;
  for (auto& f : futures) EXPECT_EQ(f.get(), expect);
}

TEST(Server, BindFailure) {
  Server first(engine(), {"127.0.0.1", 0, ""});
  first.start();
  Server second(engine(), {"127.0.0.1", first.port(), ""});
  try {
    second.start();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  EXPECT_THROW(Server(engine(), {"127.0.0.1", 70000, ""}).start(), Error);
}
