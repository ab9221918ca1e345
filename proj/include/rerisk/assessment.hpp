// SPDX-License-Identifier: Apache-2.0
//
// Criticality scoring, per-problem risk items and prioritised reports.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rerisk/bayes_net.hpp"
#include "rerisk/cegraph.hpp"
#include "rerisk/dataset.hpp"

namespace rerisk {

struct CriticalityInputs {
  std::size_t p_i = 0;   // records reporting the problem
  std::size_t n = 0;     // dataset size
  std::size_t p_ij = 0;  // records reporting the problem within the subset
  std::size_t n_j = 0;   // subset size
  double c_i = 0.0;      // weighted sum of phenomena linked to the problem
  double c_i_true = 0.0; // weighted sum of linked phenomena observed true

  bool operator==(const CriticalityInputs&) const = default;
};

// (p_i/n) * (p_ij/n_j) * (1 + c_i_true/c_i), with 0 when n_j == 0 and a
// last factor of 1 when c_i == 0. Throws InvalidInputs unless n > 0,
// p_i <= n, p_ij <= n_j <= n and 0 <= c_i_true <= c_i.
double criticality(const CriticalityInputs& inputs);

enum class RiskBand { Low, Medium, High };
std::string_view to_string(RiskBand band);

struct Thresholds {
  double low_max = 0.05;
  double high_min = 0.20;

  // Throws InvalidThresholds unless 0 <= low_max < high_min.
  void validate() const;
  RiskBand band(double criticality) const;

  bool operator==(const Thresholds&) const = default;
};

struct RankedPhenomenon {
  std::string id;
  double posterior = 0.0;

  bool operator==(const RankedPhenomenon&) const = default;
};

struct RiskItem {
  std::string problem;
  std::string label;
  double posterior = 0.0;
  double criticality = 0.0;
  RiskBand band = RiskBand::Low;
  CriticalityInputs inputs;
  // Direct causes / effects in the cause-effect graph, posterior descending.
  std::vector<RankedPhenomenon> contributing_causes;
  std::vector<RankedPhenomenon> predicted_effects;

  bool operator==(const RiskItem&) const = default;
};

struct RiskReport {
  ContextFilter context;
  std::vector<std::string> observed;  // sorted
  std::size_t n = 0;
  std::string dataset_hash;
  Thresholds thresholds;
  // Criticality descending, then posterior descending, then id.
  std::vector<RiskItem> items;

  bool operator==(const RiskReport&) const = default;
};

// Per-phenomenon weights for c_i; missing entries weigh 1.
using WeightMap = std::map<std::string, double>;

struct AssessOptions {
  WeightMap weights;
  Thresholds thresholds;
  // Filled in by assess when empty.
  std::string dataset_hash;
};

// Scores every problem in the catalog. Posteriors come from infer_all with
// the observed phenomena set true and the context factors fixed; the subset
// (n_j, p_ij) is select_subset(dataset, context, observed); linked phenomena
// are the problem's direct causes and effects in `graph`.
// Throws UnknownPhenomenonId, InconsistentEvidence.
RiskReport assess(const BayesNet& net, const Dataset& dataset, const CauseEffectGraph& graph,
                  const ContextFilter& context, const std::set<std::string>& observed,
                  const AssessOptions& options = {});
RiskReport assess(const BayesNet& net, const Dataset& dataset, const ContextFilter& context,
                  const std::set<std::string>& observed, const AssessOptions& options = {});

// Re-bands every item; the order is left unchanged.
RiskReport prioritize(RiskReport report, const Thresholds& thresholds);

inline constexpr std::string_view kReportFormat = "rerisk-report/1";

enum class ReportFormat { Json, Csv, Text };

// JSON: {"format": "rerisk-report/1", "body": {...}} plus "generated_at"
// when a timestamp is given; the body alone is deterministic.
std::string render_report(const RiskReport& report, ReportFormat format,
                          std::string_view generated_at = {});
// JSON of the report body only.
std::string report_body_json(const RiskReport& report);

}  // namespace rerisk
