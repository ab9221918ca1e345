// SPDX-License-Identifier: Apache-2.0
#include "rerisk/learn.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "rerisk/cegraph.hpp"

namespace rerisk {

namespace {

// Observations in learning-table form: one row per record.
struct Table {
  std::size_t rows = 0;
  std::vector<std::vector<std::size_t>> columns;  // node index -> state per record
};

std::size_t configuration(const Table& table, const std::vector<std::size_t>& vars,
                          const std::vector<std::size_t>& cards, std::size_t row) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) index = index * cards[j] + table.columns[vars[j]][row];
  return index;
}

double smoothed(double count, double total, double alpha, double states) {
  return (count + alpha) / (total + alpha * states);
}

std::vector<std::string> select_parents(const CauseEffectGraph& graph, const std::string& child,
                                        std::size_t cap) {
  if (!graph.contains(child)) return {};
  std::vector<std::pair<std::size_t, std::string>> candidates;
  for (const std::string& p : graph.predecessors(child)) {
    candidates.emplace_back(graph.weight(p, child), p);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (candidates.size() > cap) candidates.resize(cap);
  std::vector<std::string> out;
  for (auto& c : candidates) out.push_back(std::move(c.second));
  std::sort(out.begin(), out.end());
  return out;
}

CptParams fit_cpt(const Table& table, const std::vector<std::size_t>& parents,
                  const std::vector<std::size_t>& cards, std::size_t child, std::size_t states,
                  double alpha) {
  std::size_t rows = 1;
  for (std::size_t c : cards) rows *= c;
  std::vector<double> counts(rows * states, 0.0);
  for (std::size_t r = 0; r < table.rows; ++r) {
    counts[configuration(table, parents, cards, r) * states + table.columns[child][r]] += 1.0;
  }
  CptParams cpt;
  cpt.table.resize(rows * states);
  for (std::size_t row = 0; row < rows; ++row) {
    double total = 0.0;
    for (std::size_t s = 0; s < states; ++s) total += counts[row * states + s];
    for (std::size_t s = 0; s < states; ++s) {
      // Unseen configurations without smoothing fall back to uniform.
      cpt.table[row * states + s] = total + alpha * static_cast<double>(states) > 0.0
                                        ? smoothed(counts[row * states + s], total, alpha,
                                                   static_cast<double>(states))
                                        : 1.0 / static_cast<double>(states);
    }
  }
  return cpt;
}

// Leak per modulating configuration from records with no causal parent
// present; weight j from records where parent j is the only causal parent
// present. Empty cells fall back to pooled estimates.
NoisyOrParams fit_noisy_or(const Table& table, const std::vector<std::size_t>& parents,
                           const std::vector<std::size_t>& cards, std::size_t leak_parents,
                           std::size_t child, double alpha) {
  const std::vector<std::size_t> modulating(parents.begin(), parents.begin() + leak_parents);
  const std::vector<std::size_t> modulating_cards(cards.begin(), cards.begin() + leak_parents);
  std::size_t leak_rows = 1;
  for (std::size_t c : modulating_cards) leak_rows *= c;
  const std::size_t causal = parents.size() - leak_parents;

  std::vector<double> leak_true(leak_rows, 0.0), leak_total(leak_rows, 0.0);
  std::vector<double> only_true(causal, 0.0), only_total(causal, 0.0);
  std::vector<double> any_true(causal, 0.0), any_total(causal, 0.0);
  double child_true = 0.0;
  for (std::size_t r = 0; r < table.rows; ++r) {
    const bool y = table.columns[child][r] == 1;
    child_true += y ? 1.0 : 0.0;
    std::size_t active = 0;
    std::size_t last_active = 0;
    for (std::size_t j = 0; j < causal; ++j) {
      if (table.columns[parents[leak_parents + j]][r] == 1) {
        ++active;
        last_active = j;
        any_total[j] += 1.0;
        any_true[j] += y ? 1.0 : 0.0;
      }
    }
    if (active == 0) {
      const std::size_t m = configuration(table, modulating, modulating_cards, r);
      leak_total[m] += 1.0;
      leak_true[m] += y ? 1.0 : 0.0;
    } else if (active == 1) {
      only_total[last_active] += 1.0;
      only_true[last_active] += y ? 1.0 : 0.0;
    }
  }

  double pooled_true = 0.0, pooled_total = 0.0;
  for (std::size_t m = 0; m < leak_rows; ++m) {
    pooled_true += leak_true[m];
    pooled_total += leak_total[m];
  }
  const double base_rate = child_true / static_cast<double>(table.rows);
  const double pooled_leak =
      pooled_total + 2.0 * alpha > 0.0 ? smoothed(pooled_true, pooled_total, alpha, 2.0) : base_rate;

  NoisyOrParams params;
  params.leak_parents = leak_parents;
  for (std::size_t m = 0; m < leak_rows; ++m) {
    params.leak.push_back(leak_total[m] + 2.0 * alpha > 0.0
                              ? smoothed(leak_true[m], leak_total[m], alpha, 2.0)
                              : pooled_leak);
  }
  for (std::size_t j = 0; j < causal; ++j) {
    if (only_total[j] + 2.0 * alpha > 0.0) {
      params.weights.push_back(smoothed(only_true[j], only_total[j], alpha, 2.0));
    } else if (any_total[j] > 0.0) {
      params.weights.push_back(smoothed(any_true[j], any_total[j], alpha, 2.0));
    } else {
      params.weights.push_back(0.0);
    }
  }
  return params;
}

}  // namespace

std::string_view to_string(Parameterization p) {
  switch (p) {
    case Parameterization::Auto: return "auto";
    case Parameterization::FullCpt: return "cpt";
    case Parameterization::NoisyOr: return "noisy-or";
  }
  return "auto";
}

std::optional<Parameterization> parse_parameterization(std::string_view text) {
  if (text == "auto") return Parameterization::Auto;
  if (text == "cpt") return Parameterization::FullCpt;
  if (text == "noisy-or") return Parameterization::NoisyOr;
  return std::nullopt;
}

void LearnConfig::validate() const {
  if (max_parents < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_parents must be at least 1", {}, "max_parents");
  }
  if (!std::isfinite(smoothing_alpha) || smoothing_alpha < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "smoothing_alpha must be a finite value >= 0", {},
                "smoothing_alpha");
  }
}

std::string LearnConfig::to_json() const {
  nlohmann::json doc = {{"max_parents", max_parents},
                        {"smoothing_alpha", smoothing_alpha},
                        {"parameterization", to_string(parameterization)},
                        {"noisy_or_above", noisy_or_above},
                        {"include_context_nodes", include_context_nodes}};
  return doc.dump();
}

LearnConfig LearnConfig::from_json(std::string_view text) {
  LearnConfig config;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("learn config: ") + e.what(), {}, "config");
  }
  if (doc.is_null()) return config;
  if (!doc.is_object()) {
    throw Error(ErrorCode::MalformedInput, "learn config: expected an object", {}, "config");
  }
  const auto field = [&](const char* key, auto& out) {
    const auto it = doc.find(key);
    if (it == doc.end()) return;
    try {
      using T = std::decay_t<decltype(out)>;
      if constexpr (std::is_same_v<T, std::size_t>) {
        if (!it->is_number_unsigned()) throw std::invalid_argument("expected unsigned");
      }
      out = it->template get<std::decay_t<decltype(out)>>();
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("learn config: bad value for ") + key, {},
                  key);
    }
  };
  field("max_parents", config.max_parents);
  field("smoothing_alpha", config.smoothing_alpha);
  field("noisy_or_above", config.noisy_or_above);
  field("include_context_nodes", config.include_context_nodes);
  if (const auto it = doc.find("parameterization"); it != doc.end()) {
    const auto p = it->is_string() ? parse_parameterization(it->get<std::string>()) : std::nullopt;
    if (!p) {
      throw Error(ErrorCode::InvalidArgument,
                  "learn config: parameterization must be auto, cpt or noisy-or", {},
                  "parameterization");
    }
    config.parameterization = *p;
  }
  config.validate();
  return config;
}

BayesNet learn_network(const Dataset& dataset, const LearnConfig& config) {
  config.validate();
  if (dataset.size() == 0) {
    throw Error(ErrorCode::EmptyDataset, "cannot learn a network from an empty dataset");
  }
  const CauseEffectGraph graph = build_graph(dataset);
  const Catalog& catalog = dataset.catalog();

  std::vector<std::string> ids;
  std::vector<std::size_t> cards;
  if (config.include_context_nodes) {
    for (const std::string& factor : context_factor_ids()) {
      ids.push_back(factor);
      cards.push_back(context_factor_states(factor).size());
    }
  }
  const std::size_t context_count = ids.size();
  for (PhenomenonKind kind :
       {PhenomenonKind::Cause, PhenomenonKind::Problem, PhenomenonKind::Effect}) {
    for (std::string& id : catalog.ids(kind)) {
      ids.push_back(std::move(id));
      cards.push_back(2);
    }
  }
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t i = 0; i < ids.size(); ++i) column_of.emplace(ids[i], i);

  Table table;
  table.rows = dataset.size();
  table.columns.assign(ids.size(), std::vector<std::size_t>(table.rows, 0));
  for (std::size_t r = 0; r < table.rows; ++r) {
    const SurveyRecord& record = dataset.records()[r];
    for (std::size_t c = 0; c < context_count; ++c) {
      table.columns[c][r] = record.context.state_index(ids[c]);
    }
    for (const ProblemReport& report : record.problems) {
      table.columns[column_of.at(report.problem)][r] = 1;
      for (const std::string& id : report.causes) table.columns[column_of.at(id)][r] = 1;
      for (const std::string& id : report.effects) table.columns[column_of.at(id)][r] = 1;
    }
  }

  std::vector<BayesNode> nodes;
  nodes.reserve(ids.size());
  for (std::size_t v = 0; v < ids.size(); ++v) {
    BayesNode node;
    node.id = ids[v];
    node.states = v < context_count ? context_factor_states(ids[v]) : binary_states();

    std::vector<std::string> phenomenon_parents;
    if (v >= context_count) {
      const PhenomenonKind kind = catalog.find(ids[v])->kind;
      if (kind != PhenomenonKind::Cause) {
        phenomenon_parents = select_parents(graph, ids[v], config.max_parents);
      }
      if (kind == PhenomenonKind::Problem) {
        node.parents.assign(ids.begin(), ids.begin() + static_cast<long>(context_count));
      }
    }
    const std::size_t leak_parents = node.parents.size();
    node.parents.insert(node.parents.end(), phenomenon_parents.begin(), phenomenon_parents.end());

    std::vector<std::size_t> parent_columns, parent_cards;
    for (const std::string& p : node.parents) {
      parent_columns.push_back(column_of.at(p));
      parent_cards.push_back(cards[column_of.at(p)]);
    }
    const bool noisy =
        !node.parents.empty() &&
        (config.parameterization == Parameterization::NoisyOr ||
         (config.parameterization == Parameterization::Auto &&
          node.parents.size() > config.noisy_or_above));
    if (noisy) {
      node.params = fit_noisy_or(table, parent_columns, parent_cards, leak_parents, v,
                                 config.smoothing_alpha);
    } else {
      node.params = fit_cpt(table, parent_columns, parent_cards, v, node.states.size(),
                            config.smoothing_alpha);
    }
    nodes.push_back(std::move(node));
  }
  BayesNet net(std::move(nodes));
  validate_dag(net);
  return net;
}

}  // namespace rerisk
