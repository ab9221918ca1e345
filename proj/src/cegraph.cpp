// SPDX-License-Identifier: Apache-2.0
#include "rerisk/cegraph.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

namespace rerisk {

namespace {

bool node_less(const GraphNode& a, const GraphNode& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.id < b.id;
}

bool layered(PhenomenonKind from, PhenomenonKind to) {
  return (from == PhenomenonKind::Cause && to == PhenomenonKind::Problem) ||
         (from == PhenomenonKind::Problem && to == PhenomenonKind::Effect);
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view kind_attr(PhenomenonKind kind) {
  switch (kind) {
    case PhenomenonKind::Cause: return "cause";
    case PhenomenonKind::Problem: return "problem";
    case PhenomenonKind::Effect: return "effect";
  }
  return "cause";
}

std::string_view kind_shape(PhenomenonKind kind) {
  switch (kind) {
    case PhenomenonKind::Cause: return "ellipse";
    case PhenomenonKind::Problem: return "box";
    case PhenomenonKind::Effect: return "hexagon";
  }
  return "ellipse";
}

std::string export_dot(const CauseEffectGraph& graph, const std::set<std::string>& highlight) {
  std::ostringstream out;
  out << "digraph cause_effect {\n";
  out << "  rankdir=LR;\n";
  out << "  node [style=filled, fillcolor=\"white\"];\n";
  for (const GraphNode& node : graph.nodes()) {
    out << "  " << dot_quote(node.id) << " [label=" << dot_quote(node.label)
        << ", kind=\"" << kind_attr(node.kind) << "\", shape=" << kind_shape(node.kind);
    if (highlight.count(node.id)) {
      out << ", highlight=\"true\", fillcolor=\"" << kHighlightFill << "\"";
    }
    out << "];\n";
  }
  for (const GraphEdge& edge : graph.edges()) {
    out << "  " << dot_quote(edge.source) << " -> " << dot_quote(edge.target) << " [label=\""
        << edge.weight << "\", weight=" << edge.weight << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const CauseEffectGraph& graph, const std::set<std::string>& highlight) {
  nlohmann::ordered_json doc;
  doc["format"] = "rerisk-graph/1";
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const GraphNode& node : graph.nodes()) {
    nodes.push_back({{"id", node.id},
                     {"kind", to_string(node.kind)},
                     {"label", node.label},
                     {"highlight", highlight.count(node.id) > 0}});
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const GraphEdge& edge : graph.edges()) {
    edges.push_back({{"source", edge.source}, {"target", edge.target}, {"weight", edge.weight}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace

CauseEffectGraph::CauseEffectGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(), node_less);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw Error(ErrorCode::DuplicateId, "graph: duplicate node '" + nodes_[i].id + "'", {},
                  nodes_[i].id);
    }
  }
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (const GraphEdge& e : edges_) {
    const auto s = index_.find(e.source);
    const auto t = index_.find(e.target);
    if (s == index_.end() || t == index_.end()) {
      throw Error(ErrorCode::MalformedInput,
                  "graph: edge " + e.source + " -> " + e.target + " references a missing node");
    }
    if (!layered(nodes_[s->second].kind, nodes_[t->second].kind)) {
      throw Error(ErrorCode::MalformedInput, "graph: edge " + e.source + " -> " + e.target +
                                                 " is not cause->problem or problem->effect");
    }
    if (e.weight == 0) {
      throw Error(ErrorCode::MalformedInput,
                  "graph: edge " + e.source + " -> " + e.target + " has weight 0");
    }
    out_[s->second].push_back(t->second);
    in_[t->second].push_back(s->second);
  }
  for (auto& list : out_) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw Error(ErrorCode::MalformedInput, "graph: duplicate edge");
    }
  }
  for (auto& list : in_) std::sort(list.begin(), list.end());
  std::sort(edges_.begin(), edges_.end(), [this](const GraphEdge& a, const GraphEdge& b) {
    const auto ka = std::make_pair(index_.at(a.source), index_.at(a.target));
    const auto kb = std::make_pair(index_.at(b.source), index_.at(b.target));
    return ka < kb;
  });
}

const GraphNode* CauseEffectGraph::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t CauseEffectGraph::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownPhenomenonId,
                "phenomenon '" + std::string(id) + "' is not in the graph", {}, std::string(id));
  }
  return it->second;
}

std::vector<std::string> CauseEffectGraph::predecessors(std::string_view id) const {
  std::vector<std::string> out;
  for (std::size_t i : in_[index_of(id)]) out.push_back(nodes_[i].id);
  return out;
}

std::vector<std::string> CauseEffectGraph::successors(std::string_view id) const {
  std::vector<std::string> out;
  for (std::size_t i : out_[index_of(id)]) out.push_back(nodes_[i].id);
  return out;
}

namespace {

std::set<std::string> closure(const std::vector<GraphNode>& nodes,
                              const std::vector<std::vector<std::size_t>>& adjacency,
                              std::size_t start) {
  std::vector<bool> seen(nodes.size(), false);
  std::vector<std::size_t> stack = {start};
  std::set<std::string> out;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adjacency[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      out.insert(nodes[w].id);
      stack.push_back(w);
    }
  }
  return out;
}

}  // namespace

std::set<std::string> CauseEffectGraph::upstream(std::string_view id) const {
  return closure(nodes_, in_, index_of(id));
}

std::set<std::string> CauseEffectGraph::downstream(std::string_view id) const {
  return closure(nodes_, out_, index_of(id));
}

std::size_t CauseEffectGraph::weight(std::string_view source, std::string_view target) const {
  for (const GraphEdge& e : edges_) {
    if (e.source == source && e.target == target) return e.weight;
  }
  return 0;
}

CauseEffectGraph build_graph(const Dataset& dataset) {
  std::set<std::string> present;
  std::map<std::pair<std::string, std::string>, std::size_t> weights;
  for (const SurveyRecord& record : dataset.records()) {
    for (const ProblemReport& report : record.problems) {
      present.insert(report.problem);
      for (const std::string& c : report.causes) {
        present.insert(c);
        ++weights[{c, report.problem}];
      }
      for (const std::string& e : report.effects) {
        present.insert(e);
        ++weights[{report.problem, e}];
      }
    }
  }
  std::vector<GraphNode> nodes;
  for (const std::string& id : present) {
    const Phenomenon* p = dataset.catalog().find(id);
    nodes.push_back(GraphNode{p->id, p->kind, p->label});
  }
  std::vector<GraphEdge> edges;
  for (const auto& [key, weight] : weights) edges.push_back(GraphEdge{key.first, key.second, weight});
  return CauseEffectGraph(std::move(nodes), std::move(edges));
}

std::string export_graph(const CauseEffectGraph& graph, const std::set<std::string>& highlight,
                         GraphFormat format) {
  for (const std::string& id : highlight) {
    if (!graph.contains(id)) {
      throw Error(ErrorCode::UnknownPhenomenonId,
                  "highlighted phenomenon '" + id + "' is not in the graph", {}, id);
    }
  }
  return format == GraphFormat::Dot ? export_dot(graph, highlight) : export_json(graph, highlight);
}

CauseEffectGraph graph_from_json(std::string_view text, std::set<std::string>* highlight) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("graph json: ") + e.what());
  }
  try {
    std::vector<GraphNode> nodes;
    for (const auto& n : doc.at("nodes")) {
      const auto kind = parse_phenomenon_kind(n.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::MalformedInput, "graph json: unknown node kind");
      nodes.push_back(GraphNode{n.at("id").get<std::string>(), *kind,
                                n.at("label").get<std::string>()});
      if (highlight && n.value("highlight", false)) highlight->insert(nodes.back().id);
    }
    std::vector<GraphEdge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back(GraphEdge{e.at("source").get<std::string>(),
                                e.at("target").get<std::string>(),
                                e.at("weight").get<std::size_t>()});
    }
    return CauseEffectGraph(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("graph json: ") + e.what());
  }
}

}  // namespace rerisk
