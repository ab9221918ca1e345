// SPDX-License-Identifier: Apache-2.0
//
// Weighted cause -> problem -> effect graph distilled from survey records.
#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rerisk/dataset.hpp"

namespace rerisk {

struct GraphNode {
  std::string id;
  PhenomenonKind kind = PhenomenonKind::Cause;
  std::string label;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  std::size_t weight = 0;  // records in which both occur in one problem report

  bool operator==(const GraphEdge&) const = default;
};

class CauseEffectGraph {
 public:
  CauseEffectGraph() = default;
  // Sorts nodes by (kind, id) and edges by (source, target) node order.
  // Throws MalformedInput when an edge violates the layer rule, repeats a
  // (source, target) pair, has weight 0 or references a missing node.
  CauseEffectGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  const GraphNode* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  // Direct neighbours, in node order.
  std::vector<std::string> predecessors(std::string_view id) const;
  std::vector<std::string> successors(std::string_view id) const;

  // Transitive closure along edge direction. Throw UnknownPhenomenonId.
  std::set<std::string> upstream(std::string_view id) const;
  std::set<std::string> downstream(std::string_view id) const;

  // 0 when there is no such edge.
  std::size_t weight(std::string_view source, std::string_view target) const;

  bool operator==(const CauseEffectGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;  // node index -> successor node indices
  std::vector<std::vector<std::size_t>> in_;
};

// Nodes are the phenomena occurring in at least one record.
CauseEffectGraph build_graph(const Dataset& dataset);

enum class GraphFormat { Dot, Json };

// Highlighted nodes carry `highlight="true"` and the fill colour
// kHighlightFill in DOT, `"highlight": true` in JSON.
inline constexpr std::string_view kHighlightFill = "#f4b942";

std::string export_graph(const CauseEffectGraph& graph, const std::set<std::string>& highlight,
                         GraphFormat format);

// Parses the JSON export back into a graph; highlight flags go to
// `highlight` when given.
CauseEffectGraph graph_from_json(std::string_view text, std::set<std::string>* highlight = nullptr);

}  // namespace rerisk
