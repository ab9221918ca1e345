// SPDX-License-Identifier: Apache-2.0
#include "rerisk/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "csv.hpp"
#include "rerisk/inference.hpp"

namespace rerisk {

namespace {

void sort_ranked(std::vector<RankedPhenomenon>& list) {
  std::sort(list.begin(), list.end(), [](const RankedPhenomenon& a, const RankedPhenomenon& b) {
    if (a.posterior != b.posterior) return a.posterior > b.posterior;
    return a.id < b.id;
  });
}

double weight_of(const WeightMap& weights, const std::string& id) {
  const auto it = weights.find(id);
  return it == weights.end() ? 1.0 : it->second;
}

std::string number(double value) { return nlohmann::json(value).dump(); }

nlohmann::ordered_json ranked_json(const std::vector<RankedPhenomenon>& list) {
  auto out = nlohmann::ordered_json::array();
  for (const RankedPhenomenon& r : list) out.push_back({{"id", r.id}, {"posterior", r.posterior}});
  return out;
}

nlohmann::ordered_json body_json(const RiskReport& report) {
  nlohmann::ordered_json body;
  body["dataset"] = {{"n", report.n}, {"hash", report.dataset_hash}};
  auto context = nlohmann::ordered_json::object();
  for (const auto& [factor, state] : report.context.assignments()) context[factor] = state;
  body["context"] = std::move(context);
  body["observed"] = report.observed;
  body["thresholds"] = {{"low_max", report.thresholds.low_max},
                        {"high_min", report.thresholds.high_min}};
  auto items = nlohmann::ordered_json::array();
  for (const RiskItem& item : report.items) {
    nlohmann::ordered_json entry;
    entry["problem"] = item.problem;
    entry["label"] = item.label;
    entry["posterior"] = item.posterior;
    entry["criticality"] = item.criticality;
    entry["band"] = to_string(item.band);
    entry["inputs"] = {{"p_i", item.inputs.p_i},   {"n", item.inputs.n},
                       {"p_ij", item.inputs.p_ij}, {"n_j", item.inputs.n_j},
                       {"c_i", item.inputs.c_i},   {"c_i_true", item.inputs.c_i_true}};
    entry["contributing_causes"] = ranked_json(item.contributing_causes);
    entry["predicted_effects"] = ranked_json(item.predicted_effects);
    items.push_back(std::move(entry));
  }
  body["items"] = std::move(items);
  return body;
}

std::string top_list(const std::vector<RankedPhenomenon>& list, std::size_t limit,
                     std::string_view separator, bool fixed) {
  std::string out;
  for (std::size_t i = 0; i < std::min(limit, list.size()); ++i) {
    if (i) out += separator;
    out += list[i].id;
    out += "=";
    if (fixed) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", list[i].posterior);
      out += buf;
    } else {
      out += number(list[i].posterior);
    }
  }
  return out;
}

std::string render_csv(const RiskReport& report) {
  std::string out = detail::csv_row({"rank", "problem", "label", "criticality", "band",
                                     "posterior", "p_i", "n", "p_ij", "n_j", "c_i", "c_i_true",
                                     "contributing_causes", "predicted_effects"});
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    const RiskItem& item = report.items[i];
    out += detail::csv_row({std::to_string(i + 1), item.problem, item.label,
                            number(item.criticality), std::string(to_string(item.band)),
                            number(item.posterior), std::to_string(item.inputs.p_i),
                            std::to_string(item.inputs.n), std::to_string(item.inputs.p_ij),
                            std::to_string(item.inputs.n_j), number(item.inputs.c_i),
                            number(item.inputs.c_i_true),
                            top_list(item.contributing_causes, SIZE_MAX, ";", false),
                            top_list(item.predicted_effects, SIZE_MAX, ";", false)});
  }
  return out;
}

std::string render_text(const RiskReport& report) {
  std::ostringstream out;
  out << "RE risk assessment (n=" << report.n << ", dataset " << report.dataset_hash.substr(0, 12)
      << ")\n";
  out << "context:";
  const auto assignments = report.context.assignments();
  if (assignments.empty()) out << " (any)";
  for (const auto& [factor, state] : assignments) out << " " << factor << "=" << state;
  out << "\nobserved:";
  if (report.observed.empty()) out << " (none)";
  for (const std::string& id : report.observed) out << " " << id;
  char line[256];
  std::snprintf(line, sizeof line, "\nbands: Low <= %.4g < Medium < %.4g <= High\n\n",
                report.thresholds.low_max, report.thresholds.high_min);
  out << line;
  std::snprintf(line, sizeof line, "%-4s %-44s %11s %-6s %9s\n", "#", "problem", "criticality",
                "band", "posterior");
  out << line;
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    const RiskItem& item = report.items[i];
    std::snprintf(line, sizeof line, "%-4zu %-44s %11.6f %-6s %9.4f\n", i + 1,
                  item.problem.c_str(), item.criticality,
                  std::string(to_string(item.band)).c_str(), item.posterior);
    out << line;
    if (!item.contributing_causes.empty()) {
      out << "       causes:  " << top_list(item.contributing_causes, 3, ", ", true) << "\n";
    }
    if (!item.predicted_effects.empty()) {
      out << "       effects: " << top_list(item.predicted_effects, 3, ", ", true) << "\n";
    }
  }
  return out.str();
}

}  // namespace

double criticality(const CriticalityInputs& in) {
  const bool valid = in.n > 0 && in.p_i <= in.n && in.p_ij <= in.n_j && in.n_j <= in.n &&
                     std::isfinite(in.c_i) && std::isfinite(in.c_i_true) && in.c_i_true >= 0.0 &&
                     in.c_i_true <= in.c_i;
  if (!valid) {
    throw Error(ErrorCode::InvalidInputs,
                "criticality inputs violate 0 <= p_i <= n, 0 <= p_ij <= n_j <= n, n > 0, "
                "0 <= c_i_true <= c_i");
  }
  if (in.n_j == 0) return 0.0;
  const double linked = in.c_i > 0.0 ? 1.0 + in.c_i_true / in.c_i : 1.0;
  return static_cast<double>(in.p_i) / static_cast<double>(in.n) *
         (static_cast<double>(in.p_ij) / static_cast<double>(in.n_j)) * linked;
}

std::string_view to_string(RiskBand band) {
  switch (band) {
    case RiskBand::Low: return "Low";
    case RiskBand::Medium: return "Medium";
    case RiskBand::High: return "High";
  }
  return "Low";
}

void Thresholds::validate() const {
  if (!(std::isfinite(low_max) && std::isfinite(high_min) && low_max >= 0.0 &&
        low_max < high_min)) {
    throw Error(ErrorCode::InvalidThresholds, "thresholds must satisfy 0 <= low_max < high_min",
                {}, "thresholds");
  }
}

RiskBand Thresholds::band(double value) const {
  if (value <= low_max) return RiskBand::Low;
  if (value >= high_min) return RiskBand::High;
  return RiskBand::Medium;
}

RiskReport prioritize(RiskReport report, const Thresholds& thresholds) {
  thresholds.validate();
  report.thresholds = thresholds;
  for (RiskItem& item : report.items) item.band = thresholds.band(item.criticality);
  return report;
}

RiskReport assess(const BayesNet& net, const Dataset& dataset, const CauseEffectGraph& graph,
                  const ContextFilter& context, const std::set<std::string>& observed,
                  const AssessOptions& options) {
  options.thresholds.validate();
  for (const auto& [id, w] : options.weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "weight for '" + id + "' must be finite and >= 0",
                  {}, "weights." + id);
    }
  }
  const Catalog& catalog = dataset.catalog();
  const SubsetView subset = select_subset(dataset, context, observed);  // validates ids
  const SubsetView whole = select_subset(dataset, {}, {});

  Evidence evidence;
  for (const std::string& id : observed) {
    if (net.find(id) == nullptr) {
      throw Error(ErrorCode::UnknownNodeId, "phenomenon '" + id + "' is not in the network", {},
                  id);
    }
    evidence.phenomena[id] = true;
  }
  for (const auto& [factor, state] : context.assignments()) {
    if (net.find(factor) != nullptr) evidence.context[factor] = state;
  }
  const std::map<std::string, double> posteriors = infer_all(net, evidence);
  const auto posterior_of = [&](const std::string& id) {
    const auto it = posteriors.find(id);
    if (it == posteriors.end()) {
      throw Error(ErrorCode::UnknownNodeId, "phenomenon '" + id + "' is not in the network", {},
                  id);
    }
    return it->second;
  };

  RiskReport report;
  report.context = context;
  report.observed.assign(observed.begin(), observed.end());
  report.n = dataset.size();
  report.dataset_hash = options.dataset_hash.empty() ? dataset_hash(dataset) : options.dataset_hash;

  for (const std::string& problem : catalog.ids(PhenomenonKind::Problem)) {
    RiskItem item;
    item.problem = problem;
    item.label = catalog.find(problem)->label;
    item.posterior = posterior_of(problem);
    item.inputs.p_i = whole.p_ij(problem);
    item.inputs.n = dataset.size();
    item.inputs.p_ij = subset.p_ij(problem);
    item.inputs.n_j = subset.n_j();
    if (graph.contains(problem)) {
      for (const std::string& cause : graph.predecessors(problem)) {
        item.contributing_causes.push_back({cause, posterior_of(cause)});
      }
      for (const std::string& effect : graph.successors(problem)) {
        item.predicted_effects.push_back({effect, posterior_of(effect)});
      }
    }
    for (const auto* list : {&item.contributing_causes, &item.predicted_effects}) {
      for (const RankedPhenomenon& linked : *list) {
        const double w = weight_of(options.weights, linked.id);
        item.inputs.c_i += w;
        if (observed.count(linked.id)) item.inputs.c_i_true += w;
      }
    }
    sort_ranked(item.contributing_causes);
    sort_ranked(item.predicted_effects);
    item.criticality = dataset.size() > 0 ? criticality(item.inputs) : 0.0;
    report.items.push_back(std::move(item));
  }
  std::sort(report.items.begin(), report.items.end(), [](const RiskItem& a, const RiskItem& b) {
    if (a.criticality != b.criticality) return a.criticality > b.criticality;
    if (a.posterior != b.posterior) return a.posterior > b.posterior;
    return a.problem < b.problem;
  });
  return prioritize(std::move(report), options.thresholds);
}

RiskReport assess(const BayesNet& net, const Dataset& dataset, const ContextFilter& context,
                  const std::set<std::string>& observed, const AssessOptions& options) {
  return assess(net, dataset, build_graph(dataset), context, observed, options);
}

std::string report_body_json(const RiskReport& report) { return body_json(report).dump(2) + "\n"; }

std::string render_report(const RiskReport& report, ReportFormat format,
                          std::string_view generated_at) {
  switch (format) {
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Text: return render_text(report);
    case ReportFormat::Json: break;
  }
  nlohmann::ordered_json doc;
  doc["format"] = kReportFormat;
  doc["body"] = body_json(report);
  if (!generated_at.empty()) doc["generated_at"] = generated_at;
  return doc.dump(2) + "\n";
}

}  // namespace rerisk
