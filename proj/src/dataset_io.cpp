// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "hash.hpp"
#include "rerisk/dataset.hpp"

namespace rerisk {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 9> kCsvColumns = {
    "record_id", "company_size_band", "distribution", "process_paradigm", "problem",
    "rank",      "led_to_failure",    "causes",       "effects"};

[[noreturn]] void malformed(const std::string& where, const std::string& field,
                            const std::string& what) {
  throw Error(ErrorCode::MalformedInput, where + ": " + what + " (" + field + ")", where, field);
}

const json& require(const json& obj, const char* key, const std::string& where,
                    const std::string& field_prefix) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(where, field_prefix + key, "missing field");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where,
                           const std::string& field_prefix) {
  const json& v = require(obj, key, where, field_prefix);
  if (!v.is_string()) malformed(where, field_prefix + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> parse_id_array(const json& obj, const char* key, const std::string& where,
                                        const std::string& field) {
  std::vector<std::string> ids;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return ids;
  if (!it->is_array()) malformed(where, field, "expected an array of ids");
  for (std::size_t k = 0; k < it->size(); ++k) {
    const json& v = (*it)[k];
    if (!v.is_string()) {
      malformed(where, field + "[" + std::to_string(k) + "]", "expected a string id");
    }
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

Catalog parse_catalog(const json& array) {
  if (!array.is_array()) malformed("catalog", "catalog", "expected an array");
  std::vector<Phenomenon> phenomena;
  phenomena.reserve(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) {
    const json& entry = array[i];
    const std::string where = "catalog[" + std::to_string(i) + "]";
    if (!entry.is_object()) malformed(where, where, "expected an object");
    Phenomenon p;
    p.id = require_string(entry, "id", where, where + ".");
    const std::string kind = require_string(entry, "kind", where, where + ".");
    const auto parsed_kind = parse_phenomenon_kind(kind);
    if (!parsed_kind) malformed(where, where + ".kind", "unknown kind '" + kind + "'");
    p.kind = *parsed_kind;
    p.label = entry.contains("label") ? require_string(entry, "label", where, where + ".") : p.id;
    if (const auto it = entry.find("category"); it != entry.end() && !it->is_null()) {
      if (!it->is_string()) malformed(where, where + ".category", "expected a string");
      const auto category = parse_cause_category(it->get<std::string>());
      if (!category) {
        malformed(where, where + ".category",
                  "unknown category '" + it->get<std::string>() + "'");
      }
      p.category = category;
    }
    phenomena.push_back(std::move(p));
  }
  return Catalog(std::move(phenomena));
}

ContextProfile parse_context(const json& obj, const std::string& where) {
  if (!obj.is_object()) malformed(where, "context", "expected an object");
  ContextFilter filter;
  for (const std::string& factor : context_factor_ids()) {
    const std::string state = require_string(obj, factor.c_str(), where, "context.");
    try {
      filter.set(factor, state);
    } catch (const Error& e) {
      malformed(where, "context." + factor, "invalid state '" + state + "'");
    }
  }
  return ContextProfile{*filter.company_size_band, *filter.distribution, *filter.process_paradigm};
}

SurveyRecord parse_record(const json& obj, std::size_t index) {
  std::string where = "#" + std::to_string(index);
  if (!obj.is_object()) malformed(where, "records[" + std::to_string(index) + "]", "expected an object");
  SurveyRecord record;
  record.record_id = require_string(obj, "record_id", where, "");
  where = record.record_id;
  record.context = parse_context(require(obj, "context", where, ""), where);
  if (const auto it = obj.find("problems"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) malformed(where, "problems", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& p = (*it)[i];
      const std::string prefix = "problems[" + std::to_string(i) + "]";
      if (!p.is_object()) malformed(where, prefix, "expected an object");
      ProblemReport report;
      report.problem = require_string(p, "problem", where, prefix + ".");
      if (const auto r = p.find("rank"); r != p.end() && !r->is_null()) {
        if (!r->is_number_integer()) malformed(where, prefix + ".rank", "expected an integer");
        report.rank = r->get<int>();
      }
      if (const auto f = p.find("led_to_failure"); f != p.end()) {
        if (!f->is_boolean()) malformed(where, prefix + ".led_to_failure", "expected a boolean");
        report.led_to_failure = f->get<bool>();
      }
      report.causes = parse_id_array(p, "causes", where, prefix + ".causes");
      report.effects = parse_id_array(p, "effects", where, prefix + ".effects");
      record.problems.push_back(std::move(report));
    }
  }
  return record;
}

ordered_json catalog_to_json(const Catalog& catalog) {
  ordered_json out = ordered_json::array();
  for (const Phenomenon& p : catalog.phenomena()) {
    ordered_json entry;
    entry["id"] = p.id;
    entry["kind"] = to_string(p.kind);
    entry["label"] = p.label;
    if (p.category) entry["category"] = to_string(*p.category);
    out.push_back(std::move(entry));
  }
  return out;
}

ordered_json dataset_to_json(const Dataset& dataset) {
  ordered_json out;
  out["catalog"] = catalog_to_json(dataset.catalog());
  ordered_json records = ordered_json::array();
  for (const SurveyRecord& record : dataset.records()) {
    ordered_json r;
    r["record_id"] = record.record_id;
    r["context"] = {{"company_size_band", to_string(record.context.company_size_band)},
                    {"distribution", to_string(record.context.distribution)},
                    {"process_paradigm", to_string(record.context.process_paradigm)}};
    ordered_json problems = ordered_json::array();
    for (const ProblemReport& report : record.problems) {
      ordered_json p;
      p["problem"] = report.problem;
      if (report.rank) p["rank"] = *report.rank;
      p["led_to_failure"] = report.led_to_failure;
      p["causes"] = report.causes;
      p["effects"] = report.effects;
      problems.push_back(std::move(p));
    }
    r["problems"] = std::move(problems);
    records.push_back(std::move(r));
  }
  out["records"] = std::move(records);
  return out;
}

json parse_json_text(std::string_view source, const char* what) {
  try {
    return json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string(what) + ": " + e.what(), {}, "json");
  }
}

std::vector<std::string> split_ids(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t end = std::min(value.find(';', start), value.size());
    std::string item = value.substr(start, end - start);
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    start = end + 1;
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(';');
    out += ids[i];
  }
  return out;
}

Dataset load_csv(std::string_view source, const Catalog& catalog) {
  const auto rows = detail::parse_csv(source);
  if (rows.empty()) malformed("csv", "header", "missing header row");
  std::map<std::string_view, std::size_t> column;
  for (std::size_t c = 0; c < rows[0].size(); ++c) column.emplace(rows[0][c], c);
  std::array<std::size_t, kCsvColumns.size()> col{};
  for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
    const auto it = column.find(kCsvColumns[k]);
    if (it == column.end()) {
      malformed("csv", "header", "missing column '" + std::string(kCsvColumns[k]) + "'");
    }
    col[k] = it->second;
  }

  std::vector<SurveyRecord> records;
  std::map<std::string, std::size_t> record_of;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string line = "line " + std::to_string(r + 1);
    if (row.size() != rows[0].size()) {
      malformed(line, "row", "expected " + std::to_string(rows[0].size()) + " fields, got " +
                                 std::to_string(row.size()));
    }
    const auto cell = [&](std::size_t k) -> const std::string& { return row[col[k]]; };
    const std::string& record_id = cell(0);
    if (record_id.empty()) malformed(line, "record_id", "empty record_id");

    ContextFilter filter;
    for (std::size_t k = 1; k <= 3; ++k) {
      try {
        filter.set(kCsvColumns[k], cell(k));
      } catch (const Error&) {
        malformed(record_id, "context." + std::string(kCsvColumns[k]),
                  "invalid state '" + cell(k) + "' on " + line);
      }
    }
    const ContextProfile context{*filter.company_size_band, *filter.distribution,
                                 *filter.process_paradigm};

    auto [it, inserted] = record_of.emplace(record_id, records.size());
    if (inserted) {
      records.push_back(SurveyRecord{record_id, context, {}});
    } else if (!(records[it->second].context == context)) {
      malformed(record_id, "context", "context differs between rows (" + line + ")");
    }
    SurveyRecord& record = records[it->second];

    if (cell(4).empty()) continue;  // record without problems
    ProblemReport report;
    report.problem = cell(4);
    const std::string field = "problems[" + std::to_string(record.problems.size()) + "]";
    if (!cell(5).empty()) {
      try {
        std::size_t used = 0;
        report.rank = std::stoi(cell(5), &used);
        if (used != cell(5).size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        malformed(record_id, field + ".rank", "expected an integer, got '" + cell(5) + "'");
      }
    }
    if (cell(6) == "true") {
      report.led_to_failure = true;
    } else if (cell(6) != "false" && !cell(6).empty()) {
      malformed(record_id, field + ".led_to_failure", "expected true or false");
    }
    report.causes = split_ids(cell(7));
    report.effects = split_ids(cell(8));
    record.problems.push_back(std::move(report));
  }
  return Dataset(catalog, std::move(records));
}

std::string dataset_to_csv(const Dataset& dataset) {
  std::string out = detail::csv_row({kCsvColumns.begin(), kCsvColumns.end()});
  for (const SurveyRecord& record : dataset.records()) {
    const std::vector<std::string> head = {record.record_id,
                                           std::string(to_string(record.context.company_size_band)),
                                           std::string(to_string(record.context.distribution)),
                                           std::string(to_string(record.context.process_paradigm))};
    if (record.problems.empty()) {
      auto row = head;
      row.insert(row.end(), {"", "", "", "", ""});
      out += detail::csv_row(row);
      continue;
    }
    for (const ProblemReport& report : record.problems) {
      auto row = head;
      row.push_back(report.problem);
      row.push_back(report.rank ? std::to_string(*report.rank) : "");
      row.push_back(report.led_to_failure ? "true" : "false");
      row.push_back(join_ids(report.causes));
      row.push_back(join_ids(report.effects));
      out += detail::csv_row(row);
    }
  }
  return out;
}

}  // namespace

Catalog load_catalog_json(std::string_view source) {
  const json doc = parse_json_text(source, "catalog");
  if (doc.is_object() && doc.contains("catalog")) return parse_catalog(doc["catalog"]);
  return parse_catalog(doc);
}

Dataset load_dataset(std::string_view source, DataFormat format, const Catalog* csv_catalog) {
  if (format == DataFormat::Csv) {
    if (csv_catalog == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "csv input requires a phenomena catalog", {},
                  "catalog");
    }
    return load_csv(source, *csv_catalog);
  }
  const json doc = parse_json_text(source, "dataset");
  if (!doc.is_object()) malformed("dataset", "$", "expected a JSON object");
  if (!doc.contains("catalog")) malformed("dataset", "catalog", "missing field");
  Catalog catalog = parse_catalog(doc["catalog"]);
  std::vector<SurveyRecord> records;
  if (const auto it = doc.find("records"); it != doc.end()) {
    if (!it->is_array()) malformed("dataset", "records", "expected an array");
    records.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) records.push_back(parse_record((*it)[i], i));
  }
  return Dataset(std::move(catalog), std::move(records));
}

std::string serialize_dataset(const Dataset& dataset, DataFormat format) {
  if (format == DataFormat::Csv) return dataset_to_csv(dataset);
  return dataset_to_json(dataset).dump(2) + "\n";
}

std::string serialize_catalog_json(const Catalog& catalog) {
  return catalog_to_json(catalog).dump(2) + "\n";
}

std::string dataset_hash(const Dataset& dataset) {
  return detail::sha256_hex(dataset_to_json(dataset).dump());
}

}  // namespace rerisk
