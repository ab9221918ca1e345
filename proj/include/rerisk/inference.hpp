// SPDX-License-Identifier: Apache-2.0
//
// Exact posterior queries on a BayesNet.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rerisk/bayes_net.hpp"

namespace rerisk {

struct QueryOptions {
  // Explicit elimination order (node ids). Variables it does not mention are
  // eliminated afterwards in min-fill order; variables that do not take part
  // in the query are ignored.
  std::vector<std::string> elimination_order;
};

// P(target = target_state | evidence) by variable elimination. Nodes that
// are neither ancestors of the target nor of an evidence node are pruned
// before elimination; the remaining variables are eliminated in min-fill
// order with ties broken by id. A target fixed by the evidence yields 1 or 0.
// Throws UnknownNodeId, InvalidArgument (bad state), InconsistentEvidence,
// CycleDetected.
double posterior(const BayesNet& net, const Evidence& evidence, std::string_view target,
                 std::string_view target_state, const QueryOptions& options = {});
double posterior(const BayesNet& net, const Evidence& evidence, std::string_view target,
                 bool target_state = true, const QueryOptions& options = {});
// Keeps string literals from converting to the bool overload.
inline double posterior(const BayesNet& net, const Evidence& evidence, std::string_view target,
                        const char* target_state, const QueryOptions& options = {}) {
  return posterior(net, evidence, target, std::string_view(target_state), options);
}

// P(node = true | evidence) for every binary node; evidence-assigned nodes
// report 1.0 or 0.0.
std::map<std::string, double> infer_all(const BayesNet& net, const Evidence& evidence);

// Min-fill elimination order for the query, as node ids.
std::vector<std::string> elimination_order(const BayesNet& net, const Evidence& evidence,
                                           std::string_view target);

// Largest joint state space enumerate_joint accepts.
inline constexpr std::size_t kMaxJointStates = std::size_t{1} << 20;

// Same contract as posterior, computed by summing the full joint
// distribution. Throws TooLarge when the product of all node cardinalities
// exceeds kMaxJointStates.
double enumerate_joint(const BayesNet& net, const Evidence& evidence, std::string_view target,
                       std::string_view target_state);
double enumerate_joint(const BayesNet& net, const Evidence& evidence, std::string_view target,
                       bool target_state = true);
inline double enumerate_joint(const BayesNet& net, const Evidence& evidence,
                              std::string_view target, const char* target_state) {
  return enumerate_joint(net, evidence, target, std::string_view(target_state));
}

}  // namespace rerisk
