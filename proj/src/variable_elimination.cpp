// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "factor.hpp"
#include "rerisk/inference.hpp"

namespace rerisk {

namespace {

using detail::Factor;

struct Query {
  std::size_t target = 0;
  std::size_t target_state = 0;
  std::map<std::size_t, std::size_t> evidence;
  std::vector<bool> relevant;
};

std::size_t resolve_state(const BayesNet& net, std::size_t node, std::string_view state) {
  const auto s = net.state_index(node, state);
  if (!s) {
    throw Error(ErrorCode::InvalidArgument,
                "node '" + net.node(node).id + "' has no state '" + std::string(state) + "'", {},
                net.node(node).id, net.node(node).states);
  }
  return *s;
}

// Ancestral closure of the target and the evidence nodes; everything else is
// barren for this query and sums to one.
std::vector<bool> relevant_nodes(const BayesNet& net, std::size_t target,
                                 const std::map<std::size_t, std::size_t>& evidence) {
  std::vector<bool> keep(net.size(), false);
  std::vector<std::size_t> stack = {target};
  for (const auto& [node, state] : evidence) stack.push_back(node);
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (std::size_t p : net.parent_indices(v)) stack.push_back(p);
  }
  return keep;
}

Query prepare(const BayesNet& net, const Evidence& evidence, std::string_view target,
              std::optional<std::string_view> state_label, std::optional<bool> state_flag) {
  (void)net.topological_order();
  Query q;
  q.target = net.index_of(target);
  if (state_label) {
    q.target_state = resolve_state(net, q.target, *state_label);
  } else {
    if (!net.node(q.target).is_binary()) {
      throw Error(ErrorCode::InvalidArgument,
                  "node '" + std::string(target) + "' is not binary; name a state", {},
                  std::string(target));
    }
    q.target_state = *state_flag ? 1 : 0;
  }
  q.evidence = resolve_evidence(net, evidence);
  q.relevant = relevant_nodes(net, q.target, q.evidence);
  return q;
}

std::vector<Factor> build_factors(const BayesNet& net, const Query& q) {
  std::vector<Factor> factors;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (!q.relevant[v]) continue;
    Factor f = detail::node_factor(net, v);
    for (const auto& [node, state] : q.evidence) f = detail::reduce(f, node, state);
    factors.push_back(std::move(f));
  }
  return factors;
}

// Greedy elimination: each step removes the candidate whose elimination adds
// the fewest fill edges, ties by id. `forced` variables go first, in order.
std::vector<std::size_t> plan_order(const BayesNet& net, const std::vector<Factor>& factors,
                                    std::set<std::size_t> candidates,
                                    const std::vector<std::size_t>& forced) {
  std::map<std::size_t, std::set<std::size_t>> adjacency;
  for (const Factor& f : factors) {
    for (std::size_t a : f.vars) {
      adjacency[a];
      for (std::size_t b : f.vars) {
        if (a != b) adjacency[a].insert(b);
      }
    }
  }
  const auto eliminate = [&](std::size_t v) {
    const std::set<std::size_t> neighbours = adjacency[v];
    for (std::size_t a : neighbours) {
      for (std::size_t b : neighbours) {
        if (a != b) adjacency[a].insert(b);
      }
      adjacency[a].erase(v);
    }
    adjacency.erase(v);
    candidates.erase(v);
  };

  std::vector<std::size_t> order;
  for (std::size_t v : forced) {
    if (!candidates.count(v)) continue;
    order.push_back(v);
    eliminate(v);
  }
  while (!candidates.empty()) {
    std::size_t best = *candidates.begin();
    std::size_t best_fill = SIZE_MAX;
    for (std::size_t v : candidates) {
      const auto& nb = adjacency[v];
      std::size_t fill = 0;
      for (auto a = nb.begin(); a != nb.end(); ++a) {
        for (auto b = std::next(a); b != nb.end(); ++b) {
          if (!adjacency[*a].count(*b)) ++fill;
        }
      }
      if (fill < best_fill || (fill == best_fill && net.node(v).id < net.node(best).id)) {
        best = v;
        best_fill = fill;
      }
    }
    order.push_back(best);
    eliminate(best);
  }
  return order;
}

std::set<std::size_t> elimination_candidates(const BayesNet& net, const Query& q) {
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (q.relevant[v] && v != q.target && !q.evidence.count(v)) out.insert(v);
  }
  return out;
}

double run(const BayesNet& net, const Query& q, const QueryOptions& options) {
  if (const auto it = q.evidence.find(q.target); it != q.evidence.end()) {
    return it->second == q.target_state ? 1.0 : 0.0;
  }
  // A root with nothing observed among the relevant nodes: the answer is its
  // prior entry, returned without renormalisation.
  const bool lone_root = net.parent_indices(q.target).empty() &&
                         std::count(q.relevant.begin(), q.relevant.end(), true) == 1;
  if (lone_root) return net.probability(q.target, q.target_state, {});

  std::vector<Factor> factors = build_factors(net, q);
  std::vector<std::size_t> forced;
  for (const std::string& id : options.elimination_order) forced.push_back(net.index_of(id));
  const auto order = plan_order(net, factors, elimination_candidates(net, q), forced);

  for (std::size_t var : order) {
    std::optional<Factor> product;
    std::vector<Factor> rest;
    for (Factor& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
        product = product ? detail::multiply(*product, f) : std::move(f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (product) rest.push_back(detail::sum_out(*product, var));
    factors = std::move(rest);
  }

  Factor result{{}, {}, {1.0}};
  for (const Factor& f : factors) result = detail::multiply(result, f);
  double z = 0.0;
  for (double v : result.values) z += v;
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::InconsistentEvidence, "evidence has probability zero under the network");
  }
  // After elimination only the target is left in scope.
  return result.values[q.target_state] / z;
}

}  // namespace

double posterior(const BayesNet& net, const Evidence& evidence, std::string_view target,
                 std::string_view target_state, const QueryOptions& options) {
  return run(net, prepare(net, evidence, target, target_state, std::nullopt), options);
}

double posterior(const BayesNet& net, const Evidence& evidence, std::string_view target,
                 bool target_state, const QueryOptions& options) {
  return run(net, prepare(net, evidence, target, std::nullopt, target_state), options);
}

std::map<std::string, double> infer_all(const BayesNet& net, const Evidence& evidence) {
  std::map<std::string, double> out;
  if (net.empty()) return out;
  const auto assigned = resolve_evidence(net, evidence);
  for (std::size_t v = 0; v < net.size(); ++v) {
    const BayesNode& node = net.node(v);
    if (!node.is_binary()) continue;
    if (const auto it = assigned.find(v); it != assigned.end()) {
      out.emplace(node.id, it->second == 1 ? 1.0 : 0.0);
    } else {
      out.emplace(node.id, posterior(net, evidence, node.id, true));
    }
  }
  return out;
}

std::vector<std::string> elimination_order(const BayesNet& net, const Evidence& evidence,
                                           std::string_view target) {
  const BayesNode& node = net.node(net.index_of(target));
  const Query q = prepare(net, evidence, target, node.states.front(), std::nullopt);
  std::vector<std::string> out;
  if (q.evidence.count(q.target)) return out;
  for (std::size_t v : plan_order(net, build_factors(net, q), elimination_candidates(net, q), {})) {
    out.push_back(net.node(v).id);
  }
  return out;
}

}  // namespace rerisk
