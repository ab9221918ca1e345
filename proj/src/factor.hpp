// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "rerisk/bayes_net.hpp"

namespace rerisk::detail {

// Table over a sorted set of node indices; row-major with the last variable
// varying fastest.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

// P(node | parents) as a factor over {node} U parents.
Factor node_factor(const BayesNet& net, std::size_t node);
Factor multiply(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, std::size_t var);
// Restricts `var` to `state` and drops it from the scope.
Factor reduce(const Factor& f, std::size_t var, std::size_t state);

}  // namespace rerisk::detail
