// SPDX-License-Identifier: Apache-2.0
#include "rerisk/dataset.hpp"

#include <algorithm>
#include <unordered_set>

namespace rerisk {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view text,
                               const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 3> kKindNames = {"Cause", "Problem", "Effect"};
constexpr std::array<std::string_view, 5> kCategoryNames = {"Input", "Method", "Organization",
                                                            "People", "Tools"};
constexpr std::array<std::string_view, 5> kSizeNames = {"Micro", "Small", "Medium", "Large",
                                                        "VeryLarge"};
constexpr std::array<std::string_view, 3> kDistributionNames = {
    "Colocated", "NationallyDistributed", "InternationallyDistributed"};
constexpr std::array<std::string_view, 3> kParadigmNames = {"Agile", "PlanDriven", "Hybrid"};

template <std::size_t N>
std::vector<std::string> to_vector(const std::array<std::string_view, N>& names) {
  return {names.begin(), names.end()};
}

std::string problem_field(std::size_t index, std::string_view member) {
  std::string field = "problems[" + std::to_string(index) + "]";
  if (!member.empty()) {
    field += ".";
    field += member;
  }
  return field;
}

void check_id_list(const Catalog& catalog, const SurveyRecord& record, std::size_t problem_index,
                   std::string_view member, const std::vector<std::string>& ids,
                   PhenomenonKind expected) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const std::string field =
        problem_field(problem_index, member) + "[" + std::to_string(k) + "]";
    const Phenomenon* p = catalog.find(ids[k]);
    if (p == nullptr) {
      throw Error(ErrorCode::UnknownPhenomenonId,
                  "record '" + record.record_id + "': unknown phenomenon id '" + ids[k] +
                      "' at " + field,
                  record.record_id, field);
    }
    if (p->kind != expected) {
      throw Error(ErrorCode::KindMismatch,
                  "record '" + record.record_id + "': '" + ids[k] + "' at " + field + " is a " +
                      std::string(to_string(p->kind)) + ", expected " +
                      std::string(to_string(expected)),
                  record.record_id, field);
    }
    if (!seen.insert(ids[k]).second) {
      throw Error(ErrorCode::MalformedInput,
                  "record '" + record.record_id + "': duplicate id '" + ids[k] + "' at " + field,
                  record.record_id, field);
    }
  }
}

void validate_record(const Catalog& catalog, const SurveyRecord& record) {
  if (record.problems.size() > kMaxProblemsPerRecord) {
    throw Error(ErrorCode::MalformedInput,
                "record '" + record.record_id + "': " + std::to_string(record.problems.size()) +
                    " problems reported, at most 5 allowed",
                record.record_id, "problems");
  }
  std::unordered_set<std::string_view> problems;
  std::array<bool, kMaxRank + 1> rank_used{};
  for (std::size_t i = 0; i < record.problems.size(); ++i) {
    const ProblemReport& report = record.problems[i];
    const std::string field = problem_field(i, "problem");
    const Phenomenon* p = catalog.find(report.problem);
    if (p == nullptr) {
      throw Error(ErrorCode::UnknownPhenomenonId,
                  "record '" + record.record_id + "': unknown phenomenon id '" + report.problem +
                      "' at " + field,
                  record.record_id, field);
    }
    if (p->kind != PhenomenonKind::Problem) {
      throw Error(ErrorCode::KindMismatch,
                  "record '" + record.record_id + "': '" + report.problem + "' at " + field +
                      " is a " + std::string(to_string(p->kind)) + ", expected Problem",
                  record.record_id, field);
    }
    if (!problems.insert(report.problem).second) {
      throw Error(ErrorCode::MalformedInput,
                  "record '" + record.record_id + "': problem '" + report.problem +
                      "' reported twice",
                  record.record_id, field);
    }
    if (report.rank) {
      const int rank = *report.rank;
      if (rank < 1 || rank > kMaxRank) {
        throw Error(ErrorCode::RankOutOfRange,
                    "record '" + record.record_id + "': rank " + std::to_string(rank) +
                        " outside 1..5 at " + problem_field(i, "rank"),
                    record.record_id, problem_field(i, "rank"));
      }
      if (rank_used[rank]) {
        throw Error(ErrorCode::DuplicateRank,
                    "record '" + record.record_id + "': rank " + std::to_string(rank) +
                        " assigned twice (" + problem_field(i, "rank") + ")",
                    record.record_id, problem_field(i, "rank"));
      }
      rank_used[rank] = true;
    }
    check_id_list(catalog, record, i, "causes", report.causes, PhenomenonKind::Cause);
    check_id_list(catalog, record, i, "effects", report.effects, PhenomenonKind::Effect);
  }
}

}  // namespace

std::string_view to_string(PhenomenonKind kind) { return kKindNames[static_cast<int>(kind)]; }
std::string_view to_string(CauseCategory c) { return kCategoryNames[static_cast<int>(c)]; }
std::string_view to_string(CompanySize v) { return kSizeNames[static_cast<int>(v)]; }
std::string_view to_string(Distribution v) { return kDistributionNames[static_cast<int>(v)]; }
std::string_view to_string(ProcessParadigm v) { return kParadigmNames[static_cast<int>(v)]; }

std::optional<PhenomenonKind> parse_phenomenon_kind(std::string_view text) {
  return parse_enum<PhenomenonKind>(text, kKindNames);
}
std::optional<CauseCategory> parse_cause_category(std::string_view text) {
  return parse_enum<CauseCategory>(text, kCategoryNames);
}
std::optional<CompanySize> parse_company_size(std::string_view text) {
  return parse_enum<CompanySize>(text, kSizeNames);
}
std::optional<Distribution> parse_distribution(std::string_view text) {
  return parse_enum<Distribution>(text, kDistributionNames);
}
std::optional<ProcessParadigm> parse_process_paradigm(std::string_view text) {
  return parse_enum<ProcessParadigm>(text, kParadigmNames);
}

bool is_valid_slug(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

const std::vector<std::string>& context_factor_ids() {
  static const std::vector<std::string> ids = {std::string(kCompanySizeFactor),
                                               std::string(kDistributionFactor),
                                               std::string(kProcessParadigmFactor)};
  return ids;
}

const std::vector<std::string>& context_factor_states(std::string_view factor) {
  static const std::vector<std::string> size = to_vector(kSizeNames);
  static const std::vector<std::string> distribution = to_vector(kDistributionNames);
  static const std::vector<std::string> paradigm = to_vector(kParadigmNames);
  if (factor == kCompanySizeFactor) return size;
  if (factor == kDistributionFactor) return distribution;
  if (factor == kProcessParadigmFactor) return paradigm;
  throw Error(ErrorCode::InvalidArgument, "unknown context factor '" + std::string(factor) + "'",
              {}, std::string(factor));
}

std::size_t ContextProfile::state_index(std::string_view factor) const {
  if (factor == kCompanySizeFactor) return static_cast<std::size_t>(company_size_band);
  if (factor == kDistributionFactor) return static_cast<std::size_t>(distribution);
  if (factor == kProcessParadigmFactor) return static_cast<std::size_t>(process_paradigm);
  throw Error(ErrorCode::InvalidArgument, "unknown context factor '" + std::string(factor) + "'",
              {}, std::string(factor));
}

bool ContextFilter::matches(const ContextProfile& profile) const noexcept {
  return (!company_size_band || *company_size_band == profile.company_size_band) &&
         (!distribution || *distribution == profile.distribution) &&
         (!process_paradigm || *process_paradigm == profile.process_paradigm);
}

std::vector<std::pair<std::string, std::string>> ContextFilter::assignments() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (company_size_band)
    out.emplace_back(kCompanySizeFactor, to_string(*company_size_band));
  if (distribution) out.emplace_back(kDistributionFactor, to_string(*distribution));
  if (process_paradigm) out.emplace_back(kProcessParadigmFactor, to_string(*process_paradigm));
  return out;
}

void ContextFilter::set(std::string_view factor, std::string_view state) {
  const auto bad_state = [&] {
    return Error(ErrorCode::InvalidArgument,
                 "invalid state '" + std::string(state) + "' for context factor '" +
                     std::string(factor) + "'",
                 {}, "context." + std::string(factor), context_factor_states(factor));
  };
  if (factor == kCompanySizeFactor) {
    company_size_band = parse_company_size(state);
    if (!company_size_band) throw bad_state();
  } else if (factor == kDistributionFactor) {
    distribution = parse_distribution(state);
    if (!distribution) throw bad_state();
  } else if (factor == kProcessParadigmFactor) {
    process_paradigm = parse_process_paradigm(state);
    if (!process_paradigm) throw bad_state();
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown context factor '" + std::string(factor) + "'",
                {}, "context." + std::string(factor), context_factor_ids());
  }
}

bool SurveyRecord::mentions(std::string_view id) const {
  for (const ProblemReport& report : problems) {
    if (report.problem == id) return true;
    if (std::find(report.causes.begin(), report.causes.end(), id) != report.causes.end())
      return true;
    if (std::find(report.effects.begin(), report.effects.end(), id) != report.effects.end())
      return true;
  }
  return false;
}

const ProblemReport* SurveyRecord::find_problem(std::string_view id) const {
  for (const ProblemReport& report : problems) {
    if (report.problem == id) return &report;
  }
  return nullptr;
}

Catalog::Catalog(std::vector<Phenomenon> phenomena) : phenomena_(std::move(phenomena)) {
  for (std::size_t i = 0; i < phenomena_.size(); ++i) {
    const Phenomenon& p = phenomena_[i];
    const std::string field = "catalog[" + std::to_string(i) + "]";
    if (!is_valid_slug(p.id)) {
      throw Error(ErrorCode::MalformedInput,
                  "catalog entry " + std::to_string(i) + ": id '" + p.id +
                      "' is not a slug over [a-z0-9-]",
                  {}, field + ".id");
    }
    if (p.category && p.kind != PhenomenonKind::Cause) {
      throw Error(ErrorCode::MalformedInput,
                  "catalog entry '" + p.id + "': category is only allowed on causes", {},
                  field + ".category");
    }
    if (!index_.emplace(p.id, i).second) {
      throw Error(ErrorCode::DuplicateId, "catalog: duplicate phenomenon id '" + p.id + "'", {},
                  field + ".id");
    }
  }
}

const Phenomenon* Catalog::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &phenomena_[it->second];
}

std::vector<std::string> Catalog::ids(PhenomenonKind kind) const {
  std::vector<std::string> out;
  for (const Phenomenon& p : phenomena_) {
    if (p.kind == kind) out.push_back(p.id);
  }
  return out;
}

std::vector<std::string> Catalog::all_ids() const {
  std::vector<std::string> out;
  out.reserve(phenomena_.size());
  for (const Phenomenon& p : phenomena_) out.push_back(p.id);
  return out;
}

Dataset::Dataset(Catalog catalog, std::vector<SurveyRecord> records)
    : catalog_(std::move(catalog)), records_(std::move(records)) {
  std::unordered_set<std::string_view> record_ids;
  for (std::size_t r = 0; r < records_.size(); ++r) {
    const SurveyRecord& record = records_[r];
    if (record.record_id.empty()) {
      throw Error(ErrorCode::MalformedInput, "record #" + std::to_string(r) + ": empty record_id",
                  "#" + std::to_string(r), "record_id");
    }
    if (!record_ids.insert(record.record_id).second) {
      throw Error(ErrorCode::MalformedInput, "duplicate record_id '" + record.record_id + "'",
                  record.record_id, "record_id");
    }
    validate_record(catalog_, record);
  }
}

int ProblemFrequency::percent(std::size_t n) const noexcept {
  if (n == 0) return 0;
  return static_cast<int>((200 * total + n) / (2 * n));
}

const ProblemFrequency* FrequencyTable::find(std::string_view problem) const {
  for (const ProblemFrequency& row : rows) {
    if (row.problem == problem) return &row;
  }
  return nullptr;
}

FrequencyTable summarize(const Dataset& dataset) {
  FrequencyTable table;
  table.n = dataset.size();
  std::unordered_map<std::string, std::size_t> row_of;
  for (const std::string& id : dataset.catalog().ids(PhenomenonKind::Problem)) {
    row_of.emplace(id, table.rows.size());
    table.rows.push_back(ProblemFrequency{id});
  }
  for (const SurveyRecord& record : dataset.records()) {
    for (const ProblemReport& report : record.problems) {
      ProblemFrequency& row = table.rows[row_of.at(report.problem)];
      ++row.total;
      if (report.led_to_failure) ++row.failures;
      if (report.rank) ++row.ranks[static_cast<std::size_t>(*report.rank - 1)];
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ProblemFrequency& a, const ProblemFrequency& b) {
                     if (a.total != b.total) return a.total > b.total;
                     return a.problem < b.problem;
                   });
  return table;
}

std::size_t SubsetView::p_ij(std::string_view problem) const {
  const auto it = problem_counts_.find(std::string(problem));
  return it == problem_counts_.end() ? 0 : it->second;
}

SubsetView select_subset(const Dataset& dataset, const ContextFilter& filter,
                         const std::set<std::string>& applying) {
  for (const std::string& id : applying) {
    if (!dataset.catalog().contains(id)) {
      throw Error(ErrorCode::UnknownPhenomenonId, "unknown phenomenon id '" + id + "'", {}, id);
    }
  }
  SubsetView view;
  const auto& records = dataset.records();
  for (std::size_t r = 0; r < records.size(); ++r) {
    const SurveyRecord& record = records[r];
    if (!filter.matches(record.context)) continue;
    const bool all_apply = std::all_of(applying.begin(), applying.end(),
                                       [&](const std::string& id) { return record.mentions(id); });
    if (!all_apply) continue;
    view.record_indices_.push_back(r);
    for (const ProblemReport& report : record.problems) ++view.problem_counts_[report.problem];
  }
  return view;
}

}  // namespace rerisk
