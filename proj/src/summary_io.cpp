// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "csv.hpp"
#include "rerisk/dataset.hpp"

namespace rerisk {

std::string render_summary(const FrequencyTable& table, const Catalog& catalog,
                           SummaryFormat format) {
  const auto label_of = [&](const std::string& id) {
    const Phenomenon* p = catalog.find(id);
    return p ? p->label : id;
  };
  if (format == SummaryFormat::Json) {
    nlohmann::ordered_json doc;
    doc["n"] = table.n;
    auto& rows = doc["problems"] = nlohmann::ordered_json::array();
    for (const ProblemFrequency& row : table.rows) {
      rows.push_back({{"problem", row.problem},
                      {"label", label_of(row.problem)},
                      {"total", row.total},
                      {"percent", row.percent(table.n)},
                      {"failures", row.failures},
                      {"ranks", row.ranks}});
    }
    return doc.dump(2) + "\n";
  }
  if (format == SummaryFormat::Csv) {
    std::string out = detail::csv_row({"problem", "label", "total", "percent", "failures", "rank1",
                                       "rank2", "rank3", "rank4", "rank5"});
    for (const ProblemFrequency& row : table.rows) {
      out += detail::csv_row({row.problem, label_of(row.problem), std::to_string(row.total),
                              std::to_string(row.percent(table.n)), std::to_string(row.failures),
                              std::to_string(row.ranks[0]), std::to_string(row.ranks[1]),
                              std::to_string(row.ranks[2]), std::to_string(row.ranks[3]),
                              std::to_string(row.ranks[4])});
    }
    return out;
  }
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %11s %7s %4s %4s %4s %4s %4s\n", "RE problem",
                "total", "failure", "#1", "#2", "#3", "#4", "#5");
  out << "records: " << table.n << "\n" << line;
  for (const ProblemFrequency& row : table.rows) {
    char total[32];
    std::snprintf(total, sizeof total, "%zu (%d%%)", row.total, row.percent(table.n));
    std::snprintf(line, sizeof line, "%-44s %11s %7zu %4zu %4zu %4zu %4zu %4zu\n",
                  row.problem.c_str(), total, row.failures, row.ranks[0], row.ranks[1],
                  row.ranks[2], row.ranks[3], row.ranks[4]);
    out << line;
  }
  return out.str();
}

}  // namespace rerisk
