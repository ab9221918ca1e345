// SPDX-License-Identifier: Apache-2.0
//
// Learns the layered network from survey records:
//   context factors -> problems, causes -> problems, problems -> effects.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "rerisk/bayes_net.hpp"
#include "rerisk/dataset.hpp"

namespace rerisk {

enum class Parameterization {
  Auto,     // NoisyOr when a node has more than noisy_or_above parents
  FullCpt,
  NoisyOr,
};

std::string_view to_string(Parameterization p);
std::optional<Parameterization> parse_parameterization(std::string_view text);

struct LearnConfig {
  // Cap on phenomenon parents (causes of a problem, problems of an effect).
  // Context parents are added on top of the cap.
  std::size_t max_parents = 4;
  double smoothing_alpha = 1.0;
  Parameterization parameterization = Parameterization::Auto;
  std::size_t noisy_or_above = 4;
  bool include_context_nodes = true;

  // Throws InvalidArgument.
  void validate() const;
  // Canonical JSON; stable across runs and used as a cache key.
  std::string to_json() const;
  static LearnConfig from_json(std::string_view text);

  bool operator==(const LearnConfig&) const = default;
};

// Node order: context factors, then causes, problems and effects in catalog
// order. Throws EmptyDataset.
BayesNet learn_network(const Dataset& dataset, const LearnConfig& config = {});

}  // namespace rerisk
