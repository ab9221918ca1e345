// SPDX-License-Identifier: Apache-2.0
//
// Cross-company survey data model: the phenomena catalog (causes, problems,
// effects), per-company survey records, ingestion from JSON/CSV, frequency
// summaries and context/phenomenon subsetting.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rerisk/error.hpp"

namespace rerisk {

enum class PhenomenonKind { Cause = 0, Problem = 1, Effect = 2 };
enum class CauseCategory { Input, Method, Organization, People, Tools };

std::string_view to_string(PhenomenonKind kind);
std::string_view to_string(CauseCategory category);
std::optional<PhenomenonKind> parse_phenomenon_kind(std::string_view text);
std::optional<CauseCategory> parse_cause_category(std::string_view text);

struct Phenomenon {
  std::string id;
  PhenomenonKind kind = PhenomenonKind::Cause;
  std::string label;
  std::optional<CauseCategory> category;  // causes only

  bool operator==(const Phenomenon&) const = default;
};

// True for non-empty strings over [a-z0-9-].
bool is_valid_slug(std::string_view id);

// Company size bands: Micro <=10, Small 11-50, Medium 51-250,
// Large 251-2000, VeryLarge >2000 employees.
enum class CompanySize { Micro, Small, Medium, Large, VeryLarge };
enum class Distribution { Colocated, NationallyDistributed, InternationallyDistributed };
enum class ProcessParadigm { Agile, PlanDriven, Hybrid };

std::string_view to_string(CompanySize v);
std::string_view to_string(Distribution v);
std::string_view to_string(ProcessParadigm v);
std::optional<CompanySize> parse_company_size(std::string_view text);
std::optional<Distribution> parse_distribution(std::string_view text);
std::optional<ProcessParadigm> parse_process_paradigm(std::string_view text);

// Context factors double as node ids in the learned network; they contain an
// underscore and therefore never collide with phenomenon slugs.
inline constexpr std::string_view kCompanySizeFactor = "company_size_band";
inline constexpr std::string_view kDistributionFactor = "distribution";
inline constexpr std::string_view kProcessParadigmFactor = "process_paradigm";

// Ordered factor ids and their state labels (enum order).
const std::vector<std::string>& context_factor_ids();
const std::vector<std::string>& context_factor_states(std::string_view factor);

struct ContextProfile {
  CompanySize company_size_band = CompanySize::Micro;
  Distribution distribution = Distribution::Colocated;
  ProcessParadigm process_paradigm = ProcessParadigm::Agile;

  // Enum index of the given factor.
  std::size_t state_index(std::string_view factor) const;

  bool operator==(const ContextProfile&) const = default;
};

// Partial context: unset fields are unconstrained.
struct ContextFilter {
  std::optional<CompanySize> company_size_band;
  std::optional<Distribution> distribution;
  std::optional<ProcessParadigm> process_paradigm;

  bool empty() const noexcept {
    return !company_size_band && !distribution && !process_paradigm;
  }
  bool matches(const ContextProfile& profile) const noexcept;

  // (factor id, state label) for every set field, in factor order.
  std::vector<std::pair<std::string, std::string>> assignments() const;

  // Sets `factor` from a state label; throws InvalidArgument on unknown
  // factor or state.
  void set(std::string_view factor, std::string_view state);

  bool operator==(const ContextFilter&) const = default;
};

struct ProblemReport {
  std::string problem;
  std::optional<int> rank;
  bool led_to_failure = false;
  std::vector<std::string> causes;
  std::vector<std::string> effects;

  bool operator==(const ProblemReport&) const = default;
};

struct SurveyRecord {
  std::string record_id;
  ContextProfile context;
  std::vector<ProblemReport> problems;

  // True when `id` occurs anywhere in the record (cause, problem or effect).
  bool mentions(std::string_view id) const;
  const ProblemReport* find_problem(std::string_view id) const;

  bool operator==(const SurveyRecord&) const = default;
};

inline constexpr std::size_t kMaxProblemsPerRecord = 5;
inline constexpr int kMaxRank = 5;

class Catalog {
 public:
  Catalog() = default;
  // Validates ids (slug charset, uniqueness) and category placement.
  explicit Catalog(std::vector<Phenomenon> phenomena);

  const std::vector<Phenomenon>& phenomena() const noexcept { return phenomena_; }
  const Phenomenon* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  // Ids of the given kind, in catalog order.
  std::vector<std::string> ids(PhenomenonKind kind) const;
  std::vector<std::string> all_ids() const;

  bool operator==(const Catalog& other) const { return phenomena_ == other.phenomena_; }

 private:
  std::vector<Phenomenon> phenomena_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Dataset {
 public:
  Dataset() = default;
  // Validates every record against the catalog; throws Error.
  Dataset(Catalog catalog, std::vector<SurveyRecord> records);

  const Catalog& catalog() const noexcept { return catalog_; }
  const std::vector<SurveyRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  bool operator==(const Dataset&) const = default;

 private:
  Catalog catalog_;
  std::vector<SurveyRecord> records_;
};

enum class DataFormat { Json, Csv };

// Parses a dataset. CSV carries records only, so `csv_catalog` must be given
// for DataFormat::Csv (typically loaded with load_catalog_json).
Dataset load_dataset(std::string_view source, DataFormat format,
                     const Catalog* csv_catalog = nullptr);
Catalog load_catalog_json(std::string_view source);

std::string serialize_dataset(const Dataset& dataset, DataFormat format);
std::string serialize_catalog_json(const Catalog& catalog);

// Hex SHA-256 of the canonical JSON serialization.
std::string dataset_hash(const Dataset& dataset);

struct ProblemFrequency {
  std::string problem;
  std::size_t total = 0;
  std::size_t failures = 0;
  std::array<std::size_t, kMaxRank> ranks{};

  // total/n as integer percent, rounded half-up; 0 when n == 0.
  int percent(std::size_t n) const noexcept;
};

struct FrequencyTable {
  std::size_t n = 0;
  // Sorted by total descending, then id.
  std::vector<ProblemFrequency> rows;

  const ProblemFrequency* find(std::string_view problem) const;
};

FrequencyTable summarize(const Dataset& dataset);

enum class SummaryFormat { Json, Csv, Text };

// Text mirrors the usual "Total (pct) | failure | #1..#5" table; labels come
// from the catalog.
std::string render_summary(const FrequencyTable& table, const Catalog& catalog,
                           SummaryFormat format);

class SubsetView {
 public:
  std::size_t n_j() const noexcept { return record_indices_.size(); }
  const std::vector<std::size_t>& record_indices() const noexcept { return record_indices_; }
  // Records in the subset reporting `problem`; 0 for unknown ids.
  std::size_t p_ij(std::string_view problem) const;

 private:
  friend SubsetView select_subset(const Dataset&, const ContextFilter&,
                                  const std::set<std::string>&);
  std::vector<std::size_t> record_indices_;
  std::unordered_map<std::string, std::size_t> problem_counts_;
};

// Records matching every set context field and mentioning every phenomenon
// in `applying`. Throws UnknownPhenomenonId for ids outside the catalog.
SubsetView select_subset(const Dataset& dataset, const ContextFilter& filter,
                         const std::set<std::string>& applying);

}  // namespace rerisk
