// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <random>

#include "rerisk/assessment.hpp"
#include "rerisk/inference.hpp"
#include "rerisk/learn.hpp"
#include "testing.hpp"

using namespace rerisk;
using rerisk::testing::fixture;

namespace {

const BayesNet& fixture_net() {
  static const BayesNet net = learn_network(fixture(), {});
  return net;
}

const CauseEffectGraph& fixture_graph() {
  static const CauseEffectGraph g = build_graph(fixture());
  return g;
}

constexpr const char* kComm = "missing-direct-communication-to-customer";

}  // namespace

TEST(Criticality, WorkedExample) {
  // 0.5 * 0.5 * (1 + 1/2)
  EXPECT_DOUBLE_EQ(criticality({10, 20, 2, 4, 2.0, 1.0}), 0.375);
}

TEST(Criticality, DegenerateCases) {
  EXPECT_EQ(criticality({0, 20, 0, 4, 2.0, 1.0}), 0.0);
  EXPECT_EQ(criticality({10, 20, 0, 0, 2.0, 0.0}), 0.0);
  EXPECT_EQ(criticality({10, 20, 2, 4, 0.0, 0.0}), 0.25);
  EXPECT_EQ(criticality({20, 20, 4, 4, 3.0, 3.0}), 2.0);
}

TEST(Criticality, RejectsInvalidInputs) {
  const std::vector<CriticalityInputs> bad = {
      {1, 0, 0, 0, 0, 0},     // n == 0
      {5, 4, 0, 0, 0, 0},     // p_i > n
      {1, 4, 3, 2, 0, 0},     // p_ij > n_j
      {1, 4, 1, 5, 0, 0},     // n_j > n
      {1, 4, 1, 2, 1.0, 2.0}, // c_i_true > c_i
      {1, 4, 1, 2, 1.0, -0.5},
  };
  for (const auto& in : bad) {
    try {
      criticality(in);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInputs);
    }
  }
}

TEST(Thresholds, Bands) {
  const Thresholds t{0.1, 0.3};
  EXPECT_EQ(t.band(0.375), RiskBand::High);
  EXPECT_EQ(t.band(0.3), RiskBand::High);
  EXPECT_EQ(t.band(0.1), RiskBand::Low);
  EXPECT_EQ(t.band(0.2), RiskBand::Medium);
  EXPECT_EQ(Thresholds{}.band(0.05), RiskBand::Low);
  EXPECT_EQ(Thresholds{}.band(0.2), RiskBand::High);
}

TEST(Thresholds, Validation) {
  for (const Thresholds t : {Thresholds{0.3, 0.3}, Thresholds{0.4, 0.3}, Thresholds{-0.1, 0.3},
                             Thresholds{0.1, std::nan("")}}) {
    try {
      t.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidThresholds);
    }
  }
  EXPECT_NO_THROW((Thresholds{0.0, 1e-9}).validate());
}

TEST(Property, CriticalityMatchesBruteForce) {
  std::mt19937_64 rng(1000);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 500)(rng);
    const std::size_t p_i = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    const std::size_t n_j = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    const std::size_t p_ij = std::uniform_int_distribution<std::size_t>(0, n_j)(rng);
    const int linked = std::uniform_int_distribution<int>(0, 8)(rng);
    const int linked_true = linked ? std::uniform_int_distribution<int>(0, linked)(rng) : 0;
    // Recount from explicit record lists instead of trusting the ratios.
    std::size_t whole = 0, sub = 0, sub_hits = 0;
    for (std::size_t r = 0; r < n; ++r) whole += r < p_i;
    for (std::size_t r = 0; r < n_j; ++r) ++sub, sub_hits += r < p_ij;
    double expect = 0.0;
    if (sub > 0) {
      const double link = linked ? (linked + linked_true) / static_cast<double>(linked) : 1.0;
      expect = (static_cast<double>(whole) / n) * (static_cast<double>(sub_hits) / sub) * link;
    }
    const double got = criticality({p_i, n, p_ij, n_j, static_cast<double>(linked),
                                    static_cast<double>(linked_true)});
    EXPECT_NEAR(got, expect, 1e-12);
  }
}

TEST(Property, AssessMatchesRecountFromRawRecords) {
  std::mt19937_64 rng(1001);
  for (int t = 0; t < 300; ++t) {
    const Dataset d = rerisk::testing::random_dataset(rng);
    const ContextFilter context = rerisk::testing::random_context_filter(rng);
    const std::set<std::string> observed = rerisk::testing::random_observed(d.catalog(), rng);
    const auto expect = rerisk::testing::brute_force_criticalities(d, context, observed);
    const RiskReport report = assess(learn_network(d, {}), d, context, observed);
    ASSERT_EQ(report.items.size(), expect.size());
    for (const RiskItem& item : report.items) {
      EXPECT_NEAR(item.criticality, expect.at(item.problem), 1e-12) << item.problem;
    }
  }
}

TEST(Assess, EmptyEvidenceCollapsesToSquaredFrequency) {
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {});
  const FrequencyTable table = summarize(fixture());
  ASSERT_EQ(report.items.size(), table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const RiskItem& item = report.items[i];
    // Same order as the frequency table up to ties in the count.
    EXPECT_EQ(table.find(item.problem)->total, table.rows[i].total);
    const double f = static_cast<double>(table.find(item.problem)->total) / 228.0;
    EXPECT_NEAR(item.criticality, f * f, 1e-15);
    EXPECT_EQ(item.inputs.n_j, 228u);
    EXPECT_EQ(item.inputs.c_i_true, 0.0);
  }
  // 109 of 228 records report the top problem.
  EXPECT_NEAR(report.items[0].criticality, 11881.0 / 51984.0, 1e-15);
  EXPECT_EQ(report.items[0].band, RiskBand::High);
}

TEST(Assess, ObservedZeroOccurrencePhenomenonEmptiesSubset) {
  std::vector<Phenomenon> phenomena = fixture().catalog().phenomena();
  phenomena.push_back({"never-reported", PhenomenonKind::Cause, "Never reported",
                       CauseCategory::Tools});
  const Dataset d(Catalog(phenomena), fixture().records());
  const BayesNet net = learn_network(d, {});
  const RiskReport report = assess(net, d, {}, {"never-reported"});
  for (const RiskItem& item : report.items) {
    EXPECT_EQ(item.inputs.n_j, 0u);
    EXPECT_EQ(item.criticality, 0.0);
    EXPECT_EQ(item.band, RiskBand::Low);
  }
}

TEST(Assess, UnknownObservedId) {
  try {
    assess(fixture_net(), fixture(), fixture_graph(), {}, {"no-such-thing"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownPhenomenonId);
  }
}

TEST(Assess, ObservedCauseRaisesDownstreamProblems) {
  const RiskReport base = assess(fixture_net(), fixture(), fixture_graph(), {}, {});
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {kComm});
  const std::set<std::string> downstream = fixture_graph().downstream(kComm);
  std::size_t hit = 0, raised = 0;
  for (const RiskItem& item : report.items) {
    const auto prior = std::find_if(base.items.begin(), base.items.end(),
                                    [&](const RiskItem& b) { return b.problem == item.problem; });
    ASSERT_NE(prior, base.items.end());
    const auto succ = fixture_graph().successors(kComm);
    if (std::find(succ.begin(), succ.end(), item.problem) == succ.end()) continue;
    ++hit;
    EXPECT_GE(item.inputs.c_i_true, 1.0) << item.problem;
    EXPECT_GE(item.posterior, prior->posterior) << item.problem;
    raised += item.posterior > prior->posterior;
    for (const RankedPhenomenon& e : item.predicted_effects) EXPECT_TRUE(downstream.count(e.id));
  }
  EXPECT_GT(hit, 0u);
  EXPECT_GT(raised, 0u);
  EXPECT_TRUE(downstream.count("incorrect-or-missing-features"));
}

TEST(Assess, ItemOrdering) {
  std::mt19937_64 rng(7);
  const auto causes = fixture().catalog().ids(PhenomenonKind::Cause);
  for (int t = 0; t < 20; ++t) {
    std::set<std::string> observed;
    if (t % 2) observed.insert(causes[rng() % causes.size()]);
    const RiskReport r = assess(fixture_net(), fixture(), fixture_graph(),
                                rerisk::testing::random_context_filter(rng), observed);
    for (std::size_t i = 1; i < r.items.size(); ++i) {
      const RiskItem& a = r.items[i - 1];
      const RiskItem& b = r.items[i];
      const bool ordered = a.criticality > b.criticality ||
                           (a.criticality == b.criticality &&
                            (a.posterior > b.posterior ||
                             (a.posterior == b.posterior && a.problem < b.problem)));
      EXPECT_TRUE(ordered) << a.problem << " " << b.problem;
    }
    for (const RiskItem& item : r.items) {
      EXPECT_EQ(item.criticality, criticality(item.inputs));
      EXPECT_EQ(item.band, r.thresholds.band(item.criticality));
      EXPECT_GE(item.posterior, 0.0);
      EXPECT_LE(item.posterior, 1.0);
    }
  }
}

TEST(Assess, WeightsScaleLinkedTerm) {
  AssessOptions options;
  options.weights[kComm] = 3.0;
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {kComm}, options);
  for (const RiskItem& item : report.items) {
    double c = 0.0, c_true = 0.0;
    for (const auto* list : {&item.contributing_causes, &item.predicted_effects}) {
      for (const RankedPhenomenon& p : *list) {
        const double w = p.id == kComm ? 3.0 : 1.0;
        c += w;
        if (p.id == kComm) c_true += w;
      }
    }
    EXPECT_EQ(item.inputs.c_i, c);
    EXPECT_EQ(item.inputs.c_i_true, c_true);
  }
  options.weights[kComm] = -1.0;
  EXPECT_THROW(assess(fixture_net(), fixture(), fixture_graph(), {}, {}, options), Error);
}

TEST(Assess, PrioritizeRebandsOnly) {
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {});
  const RiskReport rebanded = prioritize(report, {0.5, 0.9});
  ASSERT_EQ(rebanded.items.size(), report.items.size());
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    EXPECT_EQ(rebanded.items[i].problem, report.items[i].problem);
    EXPECT_EQ(rebanded.items[i].band, RiskBand::Low);
  }
  EXPECT_THROW(prioritize(report, {0.9, 0.5}), Error);
}

TEST(Property, DuplicatedDatasetKeepsCriticalities) {
  // Ratios are scale free, so doubling every record leaves the scores alone.
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = rerisk::testing::random_dataset(rng);
    std::vector<SurveyRecord> doubled = d.records();
    for (SurveyRecord r : d.records()) {
      r.record_id += "-b";
      doubled.push_back(std::move(r));
    }
    const Dataset d2(d.catalog(), doubled);
    const ContextFilter filter = rerisk::testing::random_context_filter(rng);
    const RiskReport a = assess(learn_network(d, {}), d, filter, {});
    const RiskReport b = assess(learn_network(d2, {}), d2, filter, {});
    ASSERT_EQ(a.items.size(), b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      EXPECT_NEAR(a.items[i].criticality, b.items[i].criticality, 1e-12);
    }
  }
}

TEST(Render, JsonShapeAndDeterminism) {
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {kComm});
  const std::string json = render_report(report, ReportFormat::Json);
  EXPECT_EQ(json, render_report(assess(fixture_net(), fixture(), fixture_graph(), {}, {kComm}),
                                ReportFormat::Json));
  const auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["format"], kReportFormat);
  EXPECT_FALSE(doc.contains("generated_at"));
  EXPECT_EQ(doc["body"], nlohmann::json::parse(report_body_json(report)));
  const auto& body = doc["body"];
  EXPECT_EQ(body["dataset"]["n"], 228);
  EXPECT_EQ(body["dataset"]["hash"], dataset_hash(fixture()));
  EXPECT_EQ(body["observed"], nlohmann::json::array({kComm}));
  ASSERT_EQ(body["items"].size(), 10u);
  EXPECT_EQ(body["items"][0]["problem"], report.items[0].problem);
  EXPECT_EQ(body["items"][0]["criticality"].get<double>(), report.items[0].criticality);
  const auto stamped =
      nlohmann::json::parse(render_report(report, ReportFormat::Json, "2024-01-01T00:00:00Z"));
  EXPECT_EQ(stamped["generated_at"], "2024-01-01T00:00:00Z");
  EXPECT_EQ(stamped["body"], body);
}

TEST(Render, CsvAndText) {
  const RiskReport report = assess(fixture_net(), fixture(), fixture_graph(), {}, {});
  const std::string csv = render_report(report, ReportFormat::Csv);
  EXPECT_EQ(csv.rfind("rank,problem,label,criticality,band", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  const std::string text = render_report(report, ReportFormat::Text);
  EXPECT_NE(text.find("n=228"), std::string::npos);
  EXPECT_NE(text.find(report.items[0].problem), std::string::npos);
  EXPECT_NE(text.find("observed: (none)"), std::string::npos);
}
