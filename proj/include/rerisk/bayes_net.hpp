// SPDX-License-Identifier: Apache-2.0
//
// Discrete Bayesian network over phenomenon (binary) and context
// (categorical) nodes.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rerisk/error.hpp"

namespace rerisk {

// Binary nodes use exactly these states; index 1 is "true".
inline constexpr std::string_view kFalseState = "false";
inline constexpr std::string_view kTrueState = "true";
const std::vector<std::string>& binary_states();

// Full table. One row per parent configuration, |states| entries per row.
// Configurations enumerate parents in declaration order with the last
// parent varying fastest.
struct CptParams {
  std::vector<double> table;

  bool operator==(const CptParams&) const = default;
};

// Noisy-OR for a binary child:
//   P(child = true | config) = 1 - (1 - leak[m]) * prod_{j active} (1 - weights[j])
// The first `leak_parents` parents are modulating parents of any
// cardinality; `m` indexes their joint configuration (same layout as CPT
// rows). Remaining parents are binary and active when true; weights[j]
// belongs to parent leak_parents + j.
struct NoisyOrParams {
  std::size_t leak_parents = 0;
  std::vector<double> leak;
  std::vector<double> weights;

  bool operator==(const NoisyOrParams&) const = default;
};

struct BayesNode {
  std::string id;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  std::variant<CptParams, NoisyOrParams> params;

  bool is_binary() const;
  bool operator==(const BayesNode&) const = default;
};

inline constexpr double kRowSumTolerance = 1e-12;

class BayesNet {
 public:
  BayesNet() = default;
  // Checks parent resolution, parameter shapes, probability ranges and row
  // sums. Acyclicity is checked separately by validate_dag.
  explicit BayesNet(std::vector<BayesNode> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  const std::vector<BayesNode>& nodes() const noexcept { return nodes_; }
  const BayesNode& node(std::size_t index) const { return nodes_.at(index); }
  const BayesNode* find(std::string_view id) const;
  // Throws UnknownNodeId.
  std::size_t index_of(std::string_view id) const;
  std::optional<std::size_t> state_index(std::size_t node, std::string_view state) const;

  std::size_t cardinality(std::size_t node) const { return nodes_[node].states.size(); }
  const std::vector<std::size_t>& parent_indices(std::size_t node) const {
    return parents_[node];
  }

  // P(node = state | parents = parent_states), parent_states in the node's
  // parent order.
  double probability(std::size_t node, std::size_t state,
                     std::span<const std::size_t> parent_states) const;

  // Topological order of node indices; throws CycleDetected with a witness.
  std::vector<std::size_t> topological_order() const;

  bool operator==(const BayesNet& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<BayesNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
};

// Throws CycleDetected; details() holds a witness cycle such as [A, B, A].
void validate_dag(const BayesNet& net);

struct Evidence {
  std::map<std::string, bool> phenomena;           // binary nodes
  std::map<std::string, std::string> context;      // categorical nodes, by state label

  bool empty() const noexcept { return phenomena.empty() && context.empty(); }
};

// node index -> state index. Throws UnknownNodeId, InvalidArgument.
std::map<std::size_t, std::size_t> resolve_evidence(const BayesNet& net, const Evidence& evidence);

inline constexpr std::string_view kNetFormat = "rerisk-net/1";

// Probabilities are written as shortest round-trip decimals.
std::string serialize_net(const BayesNet& net);
BayesNet parse_net(std::string_view text);

}  // namespace rerisk
