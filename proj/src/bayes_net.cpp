// SPDX-License-Identifier: Apache-2.0
#include "rerisk/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace rerisk {

namespace {

std::size_t configurations(const std::vector<std::size_t>& cards, std::size_t begin,
                           std::size_t end) {
  std::size_t count = 1;
  for (std::size_t i = begin; i < end; ++i) count *= cards[i];
  return count;
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

[[noreturn]] void bad_node(const std::string& id, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, "node '" + id + "': " + what, {}, id);
}

}  // namespace

const std::vector<std::string>& binary_states() {
  static const std::vector<std::string> states = {std::string(kFalseState),
                                                  std::string(kTrueState)};
  return states;
}

bool BayesNode::is_binary() const { return states == binary_states(); }

BayesNet::BayesNet(std::vector<BayesNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id.empty()) bad_node("#" + std::to_string(i), "empty id");
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate node id '" + nodes_[i].id + "'", {},
                  nodes_[i].id);
    }
  }
  parents_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const BayesNode& n = nodes_[i];
    if (n.states.size() < 2) bad_node(n.id, "needs at least two states");
    std::vector<std::size_t> cards;
    for (const std::string& parent : n.parents) {
      const auto it = index_.find(parent);
      if (it == index_.end()) {
        throw Error(ErrorCode::UnknownNodeId,
                    "node '" + n.id + "': parent '" + parent + "' does not exist", {}, parent);
      }
      if (std::count(parents_[i].begin(), parents_[i].end(), it->second)) {
        bad_node(n.id, "parent '" + parent + "' listed twice");
      }
      parents_[i].push_back(it->second);
      cards.push_back(nodes_[it->second].states.size());
    }
    const std::size_t rows = configurations(cards, 0, cards.size());

    if (const auto* cpt = std::get_if<CptParams>(&n.params)) {
      if (cpt->table.size() != rows * n.states.size()) {
        bad_node(n.id, "table has " + std::to_string(cpt->table.size()) + " entries, expected " +
                           std::to_string(rows * n.states.size()));
      }
      for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t s = 0; s < n.states.size(); ++s) {
          const double p = cpt->table[r * n.states.size() + s];
          if (!is_probability(p)) bad_node(n.id, "probability outside [0,1]");
          sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
          bad_node(n.id, "row " + std::to_string(r) + " sums to " + std::to_string(sum));
        }
      }
    } else {
      const auto& noisy = std::get<NoisyOrParams>(n.params);
      if (!n.is_binary()) bad_node(n.id, "noisy-or requires a binary node");
      if (noisy.leak_parents > n.parents.size()) bad_node(n.id, "leak_parents exceeds parents");
      const std::size_t leak_rows = configurations(cards, 0, noisy.leak_parents);
      if (noisy.leak.size() != leak_rows) bad_node(n.id, "leak table has wrong size");
      if (noisy.weights.size() != n.parents.size() - noisy.leak_parents) {
        bad_node(n.id, "one weight per causal parent expected");
      }
      for (std::size_t j = noisy.leak_parents; j < n.parents.size(); ++j) {
        if (!nodes_[parents_[i][j]].is_binary()) {
          bad_node(n.id, "causal parent '" + n.parents[j] + "' is not binary");
        }
      }
      for (double p : noisy.leak) {
        if (!is_probability(p)) bad_node(n.id, "leak outside [0,1]");
      }
      for (double p : noisy.weights) {
        if (!is_probability(p)) bad_node(n.id, "weight outside [0,1]");
      }
    }
  }
}

const BayesNode* BayesNet::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t BayesNet::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownNodeId, "unknown node '" + std::string(id) + "'", {},
                std::string(id));
  }
  return it->second;
}

std::optional<std::size_t> BayesNet::state_index(std::size_t node, std::string_view state) const {
  const auto& states = nodes_.at(node).states;
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

double BayesNet::probability(std::size_t node, std::size_t state,
                             std::span<const std::size_t> parent_states) const {
  const BayesNode& n = nodes_[node];
  const auto& parents = parents_[node];
  if (const auto* cpt = std::get_if<CptParams>(&n.params)) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < parents.size(); ++j) {
      row = row * nodes_[parents[j]].states.size() + parent_states[j];
    }
    return cpt->table[row * n.states.size() + state];
  }
  const auto& noisy = std::get<NoisyOrParams>(n.params);
  std::size_t leak_row = 0;
  for (std::size_t j = 0; j < noisy.leak_parents; ++j) {
    leak_row = leak_row * nodes_[parents[j]].states.size() + parent_states[j];
  }
  double p_false = 1.0 - noisy.leak[leak_row];
  for (std::size_t j = noisy.leak_parents; j < parents.size(); ++j) {
    if (parent_states[j] == 1) p_false *= 1.0 - noisy.weights[j - noisy.leak_parents];
  }
  return state == 1 ? 1.0 - p_false : p_false;
}

std::vector<std::size_t> BayesNet::topological_order() const {
  enum class Mark { None, Active, Done };
  std::vector<Mark> mark(nodes_.size(), Mark::None);
  std::vector<std::size_t> order;
  order.reserve(nodes_.size());
  std::vector<std::size_t> path;

  // Iterative DFS over parent links; a node is emitted after its parents.
  for (std::size_t root = 0; root < nodes_.size(); ++root) {
    if (mark[root] != Mark::None) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack = {{root, 0}};
    mark[root] = Mark::Active;
    path.assign(1, root);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < parents_[v].size()) {
        const std::size_t p = parents_[v][next++];
        if (mark[p] == Mark::Active) {
          // path[i + 1] is a parent of path[i], so in edge direction the
          // cycle is p -> v -> path[m-1] -> ... -> path[k+1] -> p.
          const auto k = static_cast<std::size_t>(std::find(path.begin(), path.end(), p) -
                                                  path.begin());
          std::vector<std::string> witness = {nodes_[p].id};
          if (p != v) witness.push_back(nodes_[v].id);
          for (std::size_t i = path.size() - 1; i-- > k + 1;) witness.push_back(nodes_[path[i]].id);
          witness.push_back(nodes_[p].id);
          std::string text;
          for (std::size_t w = 0; w < witness.size(); ++w) text += (w ? " -> " : "") + witness[w];
          throw Error(ErrorCode::CycleDetected, "cycle detected: " + text, {}, {}, witness);
        }
        if (mark[p] == Mark::None) {
          mark[p] = Mark::Active;
          path.push_back(p);
          stack.emplace_back(p, 0);
        }
      } else {
        mark[v] = Mark::Done;
        order.push_back(v);
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return order;
}

void validate_dag(const BayesNet& net) { (void)net.topological_order(); }

std::map<std::size_t, std::size_t> resolve_evidence(const BayesNet& net, const Evidence& evidence) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& [id, value] : evidence.phenomena) {
    const std::size_t node = net.index_of(id);
    if (!net.node(node).is_binary()) {
      throw Error(ErrorCode::InvalidArgument, "node '" + id + "' is not binary", {}, id);
    }
    out.emplace(node, value ? 1 : 0);
  }
  for (const auto& [id, state] : evidence.context) {
    const std::size_t node = net.index_of(id);
    const auto s = net.state_index(node, state);
    if (!s) {
      throw Error(ErrorCode::InvalidArgument,
                  "node '" + id + "' has no state '" + state + "'", {}, id, net.node(node).states);
    }
    if (!out.emplace(node, *s).second) {
      throw Error(ErrorCode::InvalidArgument, "node '" + id + "' assigned twice", {}, id);
    }
  }
  return out;
}

std::string serialize_net(const BayesNet& net) {
  nlohmann::ordered_json doc;
  doc["format"] = kNetFormat;
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const BayesNode& n : net.nodes()) {
    nlohmann::ordered_json entry;
    entry["id"] = n.id;
    entry["states"] = n.states;
    entry["parents"] = n.parents;
    nlohmann::ordered_json params;
    if (const auto* cpt = std::get_if<CptParams>(&n.params)) {
      params["type"] = "cpt";
      params["table"] = cpt->table;
    } else {
      const auto& noisy = std::get<NoisyOrParams>(n.params);
      params["type"] = "noisy-or";
      params["leak_parents"] = noisy.leak_parents;
      params["leak"] = noisy.leak;
      params["weights"] = noisy.weights;
    }
    entry["params"] = std::move(params);
    nodes.push_back(std::move(entry));
  }
  return doc.dump(1) + "\n";
}

BayesNet parse_net(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("net json: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kNetFormat) {
      throw Error(ErrorCode::MalformedInput, "net json: unsupported format '" +
                                                 doc.at("format").get<std::string>() + "'");
    }
    std::vector<BayesNode> nodes;
    for (const auto& entry : doc.at("nodes")) {
      BayesNode n;
      n.id = entry.at("id").get<std::string>();
      n.states = entry.at("states").get<std::vector<std::string>>();
      n.parents = entry.at("parents").get<std::vector<std::string>>();
      const auto& params = entry.at("params");
      const std::string type = params.at("type").get<std::string>();
      if (type == "cpt") {
        n.params = CptParams{params.at("table").get<std::vector<double>>()};
      } else if (type == "noisy-or") {
        n.params = NoisyOrParams{params.at("leak_parents").get<std::size_t>(),
                                 params.at("leak").get<std::vector<double>>(),
                                 params.at("weights").get<std::vector<double>>()};
      } else {
        throw Error(ErrorCode::MalformedInput, "net json: unknown params type '" + type + "'");
      }
      nodes.push_back(std::move(n));
    }
    return BayesNet(std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("net json: ") + e.what());
  }
}

}  // namespace rerisk
