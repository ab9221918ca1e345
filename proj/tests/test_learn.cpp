// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rerisk/cegraph.hpp"
#include "rerisk/inference.hpp"
#include "rerisk/learn.hpp"
#include "testing.hpp"

using namespace rerisk;
using rerisk::testing::fixture;

namespace {

Catalog small_catalog() {
  return Catalog({{"c1", PhenomenonKind::Cause, "C1", {}},
                  {"c2", PhenomenonKind::Cause, "C2", {}},
                  {"c3", PhenomenonKind::Cause, "C3", {}},
                  {"p", PhenomenonKind::Problem, "P", {}},
                  {"q", PhenomenonKind::Problem, "Q", {}},
                  {"e", PhenomenonKind::Effect, "E", {}}});
}

SurveyRecord record(const std::string& id, std::vector<ProblemReport> problems = {}) {
  SurveyRecord r;
  r.record_id = id;
  r.problems = std::move(problems);
  return r;
}

// c1 reported in 3 of 10 records.
Dataset three_of_ten() {
  std::vector<SurveyRecord> records;
  for (int i = 0; i < 10; ++i) {
    if (i < 3) {
      records.push_back(record("r" + std::to_string(i), {{"p", {}, false, {"c1"}, {}}}));
    } else {
      records.push_back(record("r" + std::to_string(i)));
    }
  }
  return Dataset(small_catalog(), records);
}

const CptParams& cpt_of(const BayesNet& net, std::string_view id) {
  return std::get<CptParams>(net.find(id)->params);
}

// Every row of every node sums to one over all parent configurations.
void expect_rows_normalized(const BayesNet& net) {
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto& parents = net.parent_indices(v);
    std::vector<std::size_t> cfg(parents.size(), 0);
    for (;;) {
      double total = 0.0;
      for (std::size_t s = 0; s < net.cardinality(v); ++s) {
        const double p = net.probability(v, s, cfg);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-12) << net.node(v).id;
      std::size_t k = 0;
      while (k < cfg.size() && ++cfg[k] == net.cardinality(parents[k])) cfg[k++] = 0;
      if (k == cfg.size()) break;
    }
  }
}

}  // namespace

TEST(Learn, MaximumLikelihoodRootPrior) {
  LearnConfig config;
  config.smoothing_alpha = 0.0;
  const BayesNet net = learn_network(three_of_ten(), config);
  EXPECT_EQ(cpt_of(net, "c1").table, (std::vector<double>{0.7, 0.3}));
  EXPECT_EQ(posterior(net, {}, "c1"), 0.3);
}

TEST(Learn, LaplaceRootPrior) {
  const BayesNet net = learn_network(three_of_ten(), {});
  EXPECT_NEAR(cpt_of(net, "c1").table[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(posterior(net, {}, "c1"), (3.0 + 1.0) / (10.0 + 2.0), 1e-15);
}

TEST(Learn, Structure) {
  const BayesNet net = learn_network(fixture(), {});
  const Catalog& cat = fixture().catalog();
  EXPECT_EQ(net.size(), cat.phenomena().size() + 3);
  for (const std::string& f : context_factor_ids()) EXPECT_TRUE(net.find(f)->parents.empty());
  for (const std::string& c : cat.ids(PhenomenonKind::Cause)) EXPECT_TRUE(net.find(c)->parents.empty());
  const CauseEffectGraph graph = build_graph(fixture());
  for (const std::string& p : cat.ids(PhenomenonKind::Problem)) {
    const auto& parents = net.find(p)->parents;
    ASSERT_GE(parents.size(), 3u);
    EXPECT_EQ(std::vector<std::string>(parents.begin(), parents.begin() + 3), context_factor_ids());
    EXPECT_LE(parents.size() - 3, 4u);
    for (std::size_t k = 3; k < parents.size(); ++k) {
      EXPECT_EQ(cat.find(parents[k])->kind, PhenomenonKind::Cause);
      EXPECT_GT(graph.weight(parents[k], p), 0u);
    }
  }
  for (const std::string& e : cat.ids(PhenomenonKind::Effect)) {
    for (const std::string& parent : net.find(e)->parents) {
      EXPECT_EQ(cat.find(parent)->kind, PhenomenonKind::Problem);
    }
  }
}

TEST(Learn, ParentCapKeepsHeaviestThenLowestId) {
  // Weights into p: c1=1, c2=2, c3=2. Cap 2 keeps c2, c3; cap 1 keeps c2.
  std::vector<SurveyRecord> records = {
      record("a", {{"p", {}, false, {"c1", "c2", "c3"}, {}}}),
      record("b", {{"p", {}, false, {"c2", "c3"}, {}}}),
      record("c", {{"q", {}, false, {"c1"}, {"e"}}}),
  };
  const Dataset d(small_catalog(), records);
  LearnConfig config;
  config.include_context_nodes = false;
  config.max_parents = 2;
  EXPECT_EQ(learn_network(d, config).find("p")->parents, (std::vector<std::string>{"c2", "c3"}));
  config.max_parents = 1;
  EXPECT_EQ(learn_network(d, config).find("p")->parents, (std::vector<std::string>{"c2"}));
  config.max_parents = 5;
  EXPECT_EQ(learn_network(d, config).find("p")->parents, (std::vector<std::string>{"c1", "c2", "c3"}));
  EXPECT_EQ(learn_network(d, config).find("e")->parents, (std::vector<std::string>{"q"}));
}

TEST(Learn, FullCptCounts) {
  // p | c1 from records: c1 & p, c1 & p, c1 only (via q), neither x2.
  std::vector<SurveyRecord> records = {
      record("a", {{"p", {}, false, {"c1"}, {}}}),
      record("b", {{"p", {}, false, {"c1"}, {}}}),
      record("c", {{"q", {}, false, {"c1"}, {}}}),
      record("d"),
      record("e"),
  };
  LearnConfig config;
  config.include_context_nodes = false;
  config.smoothing_alpha = 1.0;
  config.parameterization = Parameterization::FullCpt;
  const BayesNet net = learn_network(Dataset(small_catalog(), records), config);
  ASSERT_EQ(net.find("p")->parents, (std::vector<std::string>{"c1"}));
  const auto& t = cpt_of(net, "p").table;
  // row c1=false: 0 of 2 true; row c1=true: 2 of 3 true
  EXPECT_NEAR(t[1], (0.0 + 1.0) / (2.0 + 2.0), 1e-15);
  EXPECT_NEAR(t[3], (2.0 + 1.0) / (3.0 + 2.0), 1e-15);
}

TEST(Learn, NoisyOrEstimates) {
  // Parents of p: c1, c2 (no context). Records:
  //   none active: p in 1 of 4  -> leak (1+1)/(4+2)
  //   only c1: p in 2 of 2      -> w1 (2+1)/(2+2)
  //   only c2: p in 0 of 1      -> w2 (0+1)/(1+2)
  //   both: p true (ignored by both estimates)
  std::vector<SurveyRecord> records = {
      record("n1", {{"p", {}, false, {}, {}}}), record("n2"), record("n3"), record("n4"),
      record("a1", {{"p", {}, false, {"c1"}, {}}}), record("a2", {{"p", {}, false, {"c1"}, {}}}),
      record("b1", {{"q", {}, false, {"c2"}, {}}}),
      record("ab", {{"p", {}, false, {"c1", "c2"}, {}}}),
  };
  LearnConfig config;
  config.include_context_nodes = false;
  config.parameterization = Parameterization::NoisyOr;
  const BayesNet net = learn_network(Dataset(small_catalog(), records), config);
  const auto& no = std::get<NoisyOrParams>(net.find("p")->params);
  ASSERT_EQ(net.find("p")->parents, (std::vector<std::string>{"c1", "c2"}));
  EXPECT_EQ(no.leak_parents, 0u);
  ASSERT_EQ(no.leak.size(), 1u);
  EXPECT_NEAR(no.leak[0], 2.0 / 6.0, 1e-15);
  ASSERT_EQ(no.weights.size(), 2u);
  EXPECT_NEAR(no.weights[0], 3.0 / 4.0, 1e-15);
  EXPECT_NEAR(no.weights[1], 1.0 / 3.0, 1e-15);
}

TEST(Learn, AutoSwitchesOnParentCount) {
  const BayesNet net = learn_network(fixture(), {});
  for (const BayesNode& node : net.nodes()) {
    const bool noisy = std::holds_alternative<NoisyOrParams>(node.params);
    EXPECT_EQ(noisy, node.parents.size() > 4) << node.id;
  }
  LearnConfig all_cpt;
  all_cpt.parameterization = Parameterization::FullCpt;
  for (const BayesNode& node : learn_network(fixture(), all_cpt).nodes()) {
    EXPECT_TRUE(std::holds_alternative<CptParams>(node.params));
  }
}

TEST(Learn, FixtureRowsNormalizedUnderEveryConfig) {
  for (const auto p : {Parameterization::Auto, Parameterization::FullCpt, Parameterization::NoisyOr}) {
    for (const double alpha : {0.0, 0.5, 1.0}) {
      for (const bool context : {true, false}) {
        LearnConfig config;
        config.parameterization = p;
        config.smoothing_alpha = alpha;
        config.include_context_nodes = context;
        const BayesNet net = learn_network(fixture(), config);
        EXPECT_NO_THROW(validate_dag(net));
        expect_rows_normalized(net);
      }
    }
  }
}

TEST(Learn, EmptyDatasetAndBadConfig) {
  try {
    learn_network(Dataset(small_catalog(), {}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDataset);
  }
  LearnConfig bad;
  bad.smoothing_alpha = -1.0;
  EXPECT_THROW(learn_network(three_of_ten(), bad), Error);
  bad = {};
  bad.max_parents = 0;
  EXPECT_THROW(learn_network(three_of_ten(), bad), Error);
}

TEST(Learn, ConfigJsonRoundTrip) {
  LearnConfig c;
  c.max_parents = 3;
  c.smoothing_alpha = 0.25;
  c.parameterization = Parameterization::NoisyOr;
  c.include_context_nodes = false;
  EXPECT_EQ(LearnConfig::from_json(c.to_json()), c);
  EXPECT_EQ(LearnConfig::from_json("{}"), LearnConfig{});
  EXPECT_THROW(LearnConfig::from_json(R"({"parameterization": "bogus"})"), Error);
  EXPECT_THROW(LearnConfig::from_json(R"({"max_parents": -2})"), Error);
  EXPECT_THROW(LearnConfig::from_json("[1]"), Error);
}

TEST(Learn, Deterministic) {
  EXPECT_EQ(serialize_net(learn_network(fixture(), {})), serialize_net(learn_network(fixture(), {})));
}

TEST(Property, RecordOrderDoesNotMatter) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const Dataset d = rerisk::testing::random_dataset(rng);
    std::vector<SurveyRecord> shuffled = d.records();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(learn_network(Dataset(d.catalog(), shuffled), {}), learn_network(d, {}));
  }
}

TEST(Property, DuplicatingRecordsKeepsMaximumLikelihoodCpts) {
  std::mt19937_64 rng(13);
  LearnConfig config;
  config.smoothing_alpha = 0.0;
  config.parameterization = Parameterization::FullCpt;
  for (int t = 0; t < 20; ++t) {
    const Dataset d = rerisk::testing::random_dataset(rng);
    std::vector<SurveyRecord> doubled = d.records();
    for (SurveyRecord r : d.records()) {
      r.record_id += "-copy";
      doubled.push_back(std::move(r));
    }
    EXPECT_EQ(learn_network(Dataset(d.catalog(), doubled), config), learn_network(d, config));
  }
}

TEST(Property, PriorRecovery) {
  std::mt19937_64 rng(50);
  for (int t = 0; t < 50; ++t) {
    const Dataset d = rerisk::testing::random_dataset(rng);
    for (const auto p : {Parameterization::Auto, Parameterization::FullCpt}) {
      LearnConfig config;
      config.smoothing_alpha = 0.0;
      config.parameterization = p;
      const BayesNet net = learn_network(d, config);
      std::size_t roots = 0;
      for (const BayesNode& node : net.nodes()) {
        if (!node.parents.empty() || !node.is_binary()) continue;
        ++roots;
        std::size_t count = 0;
        for (const SurveyRecord& r : d.records()) count += r.mentions(node.id);
        const double got = posterior(net, {}, node.id);
        // count/n exactly: the double matches the correctly rounded ratio and
        // scales back to the integer count.
        EXPECT_EQ(got, static_cast<double>(count) / static_cast<double>(d.size())) << node.id;
        EXPECT_EQ(std::round(got * static_cast<double>(d.size())), static_cast<double>(count));
      }
      EXPECT_GT(roots, 0u);
    }
  }
}
