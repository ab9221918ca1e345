// SPDX-License-Identifier: Apache-2.0
//
// Brute-force joint enumeration. Shares nothing with variable elimination
// beyond BayesNet::probability, which defines the model.
#include <cmath>

#include "rerisk/inference.hpp"

namespace rerisk {

namespace {

double enumerate(const BayesNet& net, const Evidence& evidence, std::size_t target,
                 std::size_t target_state) {
  validate_dag(net);
  std::size_t states = 1;
  for (std::size_t v = 0; v < net.size(); ++v) {
    states *= net.cardinality(v);
    if (states > kMaxJointStates) {
      throw Error(ErrorCode::TooLarge, "joint state space exceeds 2^20 assignments");
    }
  }
  const auto assigned = resolve_evidence(net, evidence);

  std::vector<std::size_t> assignment(net.size(), 0);
  std::vector<std::size_t> parent_states;
  double consistent = 0.0;
  double hit = 0.0;
  for (std::size_t i = 0; i < states; ++i) {
    bool matches = true;
    for (const auto& [node, state] : assigned) {
      if (assignment[node] != state) {
        matches = false;
        break;
      }
    }
    if (matches) {
      double joint = 1.0;
      for (std::size_t v = 0; v < net.size() && joint != 0.0; ++v) {
        const auto& parents = net.parent_indices(v);
        parent_states.resize(parents.size());
        for (std::size_t j = 0; j < parents.size(); ++j) parent_states[j] = assignment[parents[j]];
        joint *= net.probability(v, assignment[v], parent_states);
      }
      consistent += joint;
      if (assignment[target] == target_state) hit += joint;
    }
    for (std::size_t v = net.size(); v-- > 0;) {
      if (++assignment[v] < net.cardinality(v)) break;
      assignment[v] = 0;
    }
  }
  if (!(consistent > 0.0) || !std::isfinite(consistent)) {
    throw Error(ErrorCode::InconsistentEvidence, "evidence has probability zero under the network");
  }
  return hit / consistent;
}

}  // namespace

double enumerate_joint(const BayesNet& net, const Evidence& evidence, std::string_view target,
                       std::string_view target_state) {
  const std::size_t t = net.index_of(target);
  const auto s = net.state_index(t, target_state);
  if (!s) {
    throw Error(ErrorCode::InvalidArgument,
                "node '" + std::string(target) + "' has no state '" + std::string(target_state) +
                    "'",
                {}, std::string(target));
  }
  return enumerate(net, evidence, t, *s);
}

double enumerate_joint(const BayesNet& net, const Evidence& evidence, std::string_view target,
                       bool target_state) {
  const std::size_t t = net.index_of(target);
  if (!net.node(t).is_binary()) {
    throw Error(ErrorCode::InvalidArgument, "node '" + std::string(target) + "' is not binary", {},
                std::string(target));
  }
  return enumerate(net, evidence, t, target_state ? 1 : 0);
}

}  // namespace rerisk
