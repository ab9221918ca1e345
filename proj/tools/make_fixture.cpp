// SPDX-License-Identifier: Apache-2.0
//
// Generates data/survey-fixture.json: a synthetic 228-record survey whose
// problem marginals (totals, failure counts, rank histograms) match a
// fixed target frequency table. All cause/effect links and context profiles
// are synthetic. Uses raw mt19937 output so the bytes are identical on every
// platform.
//
//   make_fixture [output-path]   (stdout when omitted)
#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::ordered_json;

constexpr std::uint32_t kSeed = 20171127;
constexpr int kRecords = 228;
constexpr int kRanks = 5;

struct ProblemSpec {
  const char* id;
  const char* label;
  int failures;
  std::array<int, kRanks> ranks;  // number of reports at rank 1..5
  // (cause id, weight) and (effect id, weight) pools for the report's links.
  std::vector<std::pair<const char*, int>> causes;
  std::vector<std::pair<const char*, int>> effects;
};

struct Entry {
  const char* id;
  const char* kind;
  const char* label;
  const char* category;  // causes only
};

const std::vector<Entry> kCauses = {
    {"missing-direct-communication-to-customer", "Cause", "Missing direct communication to the customer", "Organization"},
    {"language-barriers", "Cause", "Language barriers", "Organization"},
    {"missing-customer-engagement", "Cause", "Missing engagement by the customer", "Organization"},
    {"unclear-responsibilities", "Cause", "Unclear responsibilities", "Organization"},
    {"distributed-teams", "Cause", "Geographically distributed teams", "Organization"},
    {"lack-of-time", "Cause", "Lack of time", "Organization"},
    {"lack-of-domain-knowledge", "Cause", "Lack of domain knowledge", "People"},
    {"weak-re-qualification", "Cause", "Weak qualification in RE", "People"},
    {"high-staff-turnover", "Cause", "High staff turnover", "People"},
    {"missing-re-process", "Cause", "Missing or undefined RE process", "Method"},
    {"no-requirements-reviews", "Cause", "No requirements reviews", "Method"},
    {"poor-change-management", "Cause", "Poor change management", "Method"},
    {"customer-unaware-of-needs", "Cause", "Customer does not know what they want", "Input"},
    {"volatile-business-environment", "Cause", "Volatile business environment", "Input"},
    {"unclear-business-goals", "Cause", "Unclear business goals", "Input"},
    {"missing-tool-support", "Cause", "Missing tool support", "Tools"},
    {"inadequate-traceability", "Cause", "Inadequate traceability", "Tools"},
};

const std::vector<Entry> kEffects = {
    {"incorrect-or-missing-features", "Effect", "Incorrect or missing features", nullptr},
    {"time-overrun", "Effect", "Time overrun", nullptr},
    {"cost-overrun", "Effect", "Cost overrun", nullptr},
    {"customer-dissatisfaction", "Effect", "Customer dissatisfaction", nullptr},
    {"high-rework-effort", "Effect", "High rework effort", nullptr},
    {"poor-product-quality", "Effect", "Poor product quality", nullptr},
    {"frequent-change-requests", "Effect", "Frequent change requests", nullptr},
    {"implementation-defects", "Effect", "Defects in the implementation", nullptr},
    {"team-demotivation", "Effect", "Team demotivation", nullptr},
    {"communication-overhead", "Effect", "Communication overhead", nullptr},
};

const std::vector<ProblemSpec> kProblems = {
    {"incomplete-hidden-requirements", "Incomplete and/or hidden requirements", 43, {34, 25, 23, 17, 10},
     {{"customer-unaware-of-needs", 5}, {"lack-of-domain-knowledge", 4}, {"missing-re-process", 3},
      {"lack-of-time", 3}, {"no-requirements-reviews", 2}, {"weak-re-qualification", 2}},
     {{"incorrect-or-missing-features", 5}, {"high-rework-effort", 4}, {"time-overrun", 3},
      {"customer-dissatisfaction", 2}, {"cost-overrun", 2}}},
    {"communication-flaws-team-customer", "Communication flaws between project team and customer", 45, {36, 22, 15, 9, 11},
     {{"missing-direct-communication-to-customer", 6}, {"language-barriers", 4},
      {"missing-customer-engagement", 5}, {"distributed-teams", 2}, {"unclear-responsibilities", 1}},
     {{"incorrect-or-missing-features", 6}, {"customer-dissatisfaction", 4}, {"poor-product-quality", 3},
      {"high-rework-effort", 2}, {"communication-overhead", 2}}},
    {"moving-targets", "Moving targets", 39, {23, 16, 13, 12, 12},
     {{"volatile-business-environment", 5}, {"poor-change-management", 4},
      {"unclear-business-goals", 3}, {"customer-unaware-of-needs", 2}},
     {{"frequent-change-requests", 5}, {"time-overrun", 4}, {"cost-overrun", 3},
      {"high-rework-effort", 3}, {"team-demotivation", 1}}},
    {"underspecified-requirements", "Underspecified requirements that are too abstract", 28, {10, 17, 18, 19, 12},
     {{"weak-re-qualification", 4}, {"lack-of-time", 4}, {"lack-of-domain-knowledge", 3},
      {"no-requirements-reviews", 3}, {"missing-re-process", 2}},
     {{"implementation-defects", 4}, {"high-rework-effort", 4}, {"incorrect-or-missing-features", 3},
      {"communication-overhead", 2}}},
    {"time-boxing", "Time boxing / not enough time in general", 24, {16, 11, 14, 17, 14},
     {{"lack-of-time", 6}, {"unclear-business-goals", 2}, {"high-staff-turnover", 2},
      {"poor-change-management", 1}},
     {{"time-overrun", 4}, {"poor-product-quality", 4}, {"implementation-defects", 3},
      {"team-demotivation", 2}}},
    {"communication-flaws-within-team", "Communication flaws within the project team", 25, {19, 13, 11, 9, 10},
     {{"distributed-teams", 4}, {"unclear-responsibilities", 4}, {"language-barriers", 2},
      {"high-staff-turnover", 2}, {"missing-tool-support", 2}},
     {{"communication-overhead", 5}, {"team-demotivation", 3}, {"implementation-defects", 3},
      {"time-overrun", 2}}},
    {"stakeholders-confuse-requirements-and-solutions", "Stakeholders with difficulties in separating requirements from known solution designs", 10, {13, 13, 12, 9, 9},
     {{"customer-unaware-of-needs", 4}, {"weak-re-qualification", 3}, {"lack-of-domain-knowledge", 2}},
     {{"incorrect-or-missing-features", 3}, {"poor-product-quality", 3}, {"frequent-change-requests", 2}}},
    {"insufficient-customer-support", "Insufficient support by customer", 24, {6, 13, 12, 6, 8},
     {{"missing-customer-engagement", 6}, {"missing-direct-communication-to-customer", 3},
      {"unclear-responsibilities", 2}},
     {{"customer-dissatisfaction", 4}, {"incorrect-or-missing-features", 3}, {"time-overrun", 3}}},
    {"inconsistent-requirements", "Inconsistent requirements", 15, {8, 9, 6, 9, 12},
     {{"inadequate-traceability", 5}, {"no-requirements-reviews", 4}, {"missing-tool-support", 3},
      {"poor-change-management", 2}},
     {{"implementation-defects", 4}, {"high-rework-effort", 4}, {"poor-product-quality", 2}}},
    {"weak-access-to-customer-needs", "Weak access to customer needs and/or business information", 16, {7, 10, 8, 8, 9},
     {{"missing-direct-communication-to-customer", 5}, {"unclear-business-goals", 3},
      {"lack-of-domain-knowledge", 3}, {"language-barriers", 2}},
     {{"incorrect-or-missing-features", 5}, {"customer-dissatisfaction", 3}, {"frequent-change-requests", 2}}},
};

class Rng {
 public:
  explicit Rng(std::uint32_t seed) : engine_(seed) {}
  // Modulo reduction of raw output: slightly biased, fully portable.
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(engine_() % n); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(static_cast<std::uint32_t>(i))]);
  }
  std::size_t weighted(const std::vector<int>& weights) {
    int total = 0;
    for (int w : weights) total += w;
    int pick = static_cast<int>(below(static_cast<std::uint32_t>(total)));
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (pick < weights[i]) return i;
      pick -= weights[i];
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937 engine_;
};

struct Report {
  int problem;
  int rank;
  bool failure = false;
  std::vector<std::string> causes;
  std::vector<std::string> effects;
};

// Ranks 1..k for a record with k problems. Per-rank column sums decrease,
// so the number of records with exactly k problems is col[k-1] - col[k].
std::vector<int> problem_counts_per_record() {
  std::array<int, kRanks + 1> col{};
  for (const ProblemSpec& p : kProblems) {
    for (int r = 0; r < kRanks; ++r) col[r] += p.ranks[r];
  }
  std::vector<int> out;
  for (int k = kRanks; k >= 0; --k) {
    const int upper = k == 0 ? kRecords : col[k - 1];
    const int lower = col[k];
    for (int i = 0; i < upper - lower; ++i) out.push_back(k);
  }
  return out;
}

// Assigns problems to (record, rank) slots without repeating a problem in a
// record; picks the allowed problem with the most remaining reports first.
bool assign_problems(Rng& rng, const std::vector<int>& sizes, std::vector<std::vector<Report>>& out) {
  out.assign(sizes.size(), {});
  for (int r = 0; r < kRanks; ++r) {
    std::vector<int> remaining;
    for (const ProblemSpec& p : kProblems) remaining.push_back(p.ranks[r]);
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] > r) slots.push_back(i);
    }
    rng.shuffle(slots);
    for (std::size_t rec : slots) {
      int best = -1;
      for (int p = 0; p < static_cast<int>(kProblems.size()); ++p) {
        if (remaining[p] == 0) continue;
        const bool used = std::any_of(out[rec].begin(), out[rec].end(),
                                      [p](const Report& x) { return x.problem == p; });
        if (used) continue;
        if (best < 0 || remaining[p] > remaining[best]) best = p;
      }
      if (best < 0) return false;
      --remaining[best];
      out[rec].push_back(Report{best, r + 1, false, {}, {}});
    }
  }
  return true;
}

std::vector<std::string> draw_links(Rng& rng, const std::vector<std::pair<const char*, int>>& pool) {
  const std::size_t count = 1 + rng.below(std::min<std::uint32_t>(3, static_cast<std::uint32_t>(pool.size())));
  std::vector<std::pair<const char*, int>> left = pool;
  std::vector<std::string> out;
  while (out.size() < count) {
    std::vector<int> w;
    for (const auto& e : left) w.push_back(e.second);
    const std::size_t i = rng.weighted(w);
    out.emplace_back(left[i].first);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has(const std::vector<Report>& reports, const char* id) {
  return std::any_of(reports.begin(), reports.end(),
                     [id](const Report& r) { return std::string(kProblems[r.problem].id) == id; });
}

ordered_json context_for(Rng& rng, const std::vector<Report>& reports) {
  static const char* sizes[] = {"Micro", "Small", "Medium", "Large", "VeryLarge"};
  static const char* dists[] = {"Colocated", "NationallyDistributed", "InternationallyDistributed"};
  static const char* paradigms[] = {"Agile", "PlanDriven", "Hybrid"};

  std::vector<int> size_w = {2, 4, 5, 5, 4};
  std::vector<int> dist_w = {6, 4, 3};
  std::vector<int> para_w = {5, 3, 3};
  if (has(reports, "communication-flaws-team-customer") || has(reports, "weak-access-to-customer-needs")) {
    dist_w[2] += 5;
  }
  if (has(reports, "communication-flaws-within-team")) dist_w[1] += 3;
  if (has(reports, "moving-targets") || has(reports, "time-boxing")) para_w[0] += 4;
  if (has(reports, "incomplete-hidden-requirements")) para_w[1] += 2;
  if (has(reports, "inconsistent-requirements")) { size_w[3] += 2; size_w[4] += 3; }
  if (has(reports, "insufficient-customer-support")) size_w[1] += 2;

  ordered_json ctx;
  ctx["company_size_band"] = sizes[rng.weighted(size_w)];
  ctx["distribution"] = dists[rng.weighted(dist_w)];
  ctx["process_paradigm"] = paradigms[rng.weighted(para_w)];
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  Rng rng(kSeed);

  std::vector<int> sizes = problem_counts_per_record();
  if (static_cast<int>(sizes.size()) != kRecords) {
    std::cerr << "rank table does not fit " << kRecords << " records\n";
    return 1;
  }
  rng.shuffle(sizes);

  std::vector<std::vector<Report>> records;
  int attempts = 0;
  while (!assign_problems(rng, sizes, records)) {
    if (++attempts == 1000) {
      std::cerr << "could not place problems\n";
      return 1;
    }
  }

  // Failure flags: a shuffled subset of each problem's reports.
  for (int p = 0; p < static_cast<int>(kProblems.size()); ++p) {
    std::vector<Report*> mine;
    for (auto& rec : records) {
      for (Report& r : rec) {
        if (r.problem == p) mine.push_back(&r);
      }
    }
    rng.shuffle(mine);
    for (int i = 0; i < kProblems[p].failures; ++i) mine[i]->failure = true;
  }

  for (auto& rec : records) {
    for (Report& r : rec) {
      r.causes = draw_links(rng, kProblems[r.problem].causes);
      r.effects = draw_links(rng, kProblems[r.problem].effects);
    }
  }

  ordered_json doc;
  ordered_json catalog = ordered_json::array();
  const auto add = [&catalog](const Entry& e) {
    ordered_json j;
    j["id"] = e.id;
    j["kind"] = e.kind;
    j["label"] = e.label;
    if (e.category) j["category"] = e.category;
    catalog.push_back(std::move(j));
  };
  for (const Entry& e : kCauses) add(e);
  for (const ProblemSpec& p : kProblems) add({p.id, "Problem", p.label, nullptr});
  for (const Entry& e : kEffects) add(e);
  doc["catalog"] = std::move(catalog);

  ordered_json out_records = ordered_json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<Report>& rec = records[i];
    std::sort(rec.begin(), rec.end(), [](const Report& a, const Report& b) { return a.rank < b.rank; });
    char id[32];
    std::snprintf(id, sizeof id, "r%03zu", i + 1);
    ordered_json r;
    r["record_id"] = id;
    r["context"] = context_for(rng, rec);
    ordered_json problems = ordered_json::array();
    for (const Report& rep : rec) {
      ordered_json p;
      p["problem"] = kProblems[rep.problem].id;
      p["rank"] = rep.rank;
      p["led_to_failure"] = rep.failure;
      p["causes"] = rep.causes;
      p["effects"] = rep.effects;
      problems.push_back(std::move(p));
    }
    r["problems"] = std::move(problems);
    out_records.push_back(std::move(r));
  }
  doc["records"] = std::move(out_records);

  const std::string text = doc.dump(2) + "\n";
  if (argc > 1) {
    std::ofstream out(argv[1], std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::cerr << "cannot write " << argv[1] << "\n";
      return 1;
    }
  } else {
    std::cout << text;
  }
  return 0;
}
