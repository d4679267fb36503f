#include "netpart/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <string>

#include "netpart/error.hpp"

namespace netpart {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

RoadGraph RoadGraph::from_indices(std::vector<std::string> roads,
                                  std::span<const std::pair<std::size_t, std::size_t>> edges) {
  RoadGraph g;
  g.roads_ = std::move(roads);
  for (std::size_t i = 0; i < g.roads_.size(); ++i) {
    if (!g.index_.emplace(g.roads_[i], i).second)
      throw Error(ErrorKind::DuplicateRoad, "road " + g.roads_[i] + " listed twice");
  }
  for (auto [a, b] : edges) {
    if (a >= g.roads_.size() || b >= g.roads_.size())
      throw Error(ErrorKind::UnknownEndpoint, "edge endpoint index out of range");
    if (a == b) throw Error(ErrorKind::SelfLoop, "road " + g.roads_[a] + " adjacent to itself");
    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
  g.neighbors_.assign(g.roads_.size(), {});
  for (auto [a, b] : g.edges_) {
    g.neighbors_[a].push_back(b);
    g.neighbors_[b].push_back(a);
  }
  for (auto& n : g.neighbors_) std::sort(n.begin(), n.end());
  return g;
}

RoadGraph RoadGraph::build(std::vector<std::string> roads, std::span<const RoadEdge> edges) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < roads.size(); ++i)
    if (!index.emplace(roads[i], i).second)
      throw Error(ErrorKind::DuplicateRoad, "road " + roads[i] + " listed twice");
  std::vector<std::pair<std::size_t, std::size_t>> indexed;
  indexed.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const auto ia = index.find(a);
    const auto ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw Error(ErrorKind::UnknownEndpoint,
                  "edge (" + a + ", " + b + ") names road " + (ia == index.end() ? a : b) +
                      " which is not in the road list");
    if (ia->second == ib->second) throw Error(ErrorKind::SelfLoop, "edge (" + a + ", " + b + ")");
    indexed.emplace_back(ia->second, ib->second);
  }
  return from_indices(std::move(roads), indexed);
}

std::optional<std::size_t> RoadGraph::index_of(std::string_view road_id) const {
  const auto it = index_.find(std::string(road_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool RoadGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto& n = neighbors_[a];
  return std::binary_search(n.begin(), n.end(), b);
}

std::vector<std::uint8_t> RoadGraph::adjacency_matrix() const {
  const std::size_t n = size();
  std::vector<std::uint8_t> m(n * n, 0);
  for (auto [a, b] : edges_) {
    m[a * n + b] = 1;
    m[b * n + a] = 1;
  }
  return m;
}

std::vector<std::vector<std::size_t>> ClusterSet::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t road = 0; road < assignment.size(); ++road) out[assignment[road]].push_back(road);
  return out;
}

ClusterSet ClusterSet::from_labels(std::span<const std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> relabel;
  ClusterSet out;
  out.assignment.reserve(labels.size());
  for (std::size_t label : labels) {
    const auto [it, inserted] = relabel.emplace(label, relabel.size());
    out.assignment.push_back(it->second);
  }
  out.k = relabel.size();
  return out;
}

std::vector<std::vector<std::size_t>> connected_components(const RoadGraph& graph,
                                                           std::span<const std::size_t> subset) {
  std::vector<std::uint8_t> in_subset(graph.size(), 0), seen(graph.size(), 0);
  for (std::size_t r : subset) in_subset[r] = 1;
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start : sorted) {
    if (seen[start]) continue;
    std::vector<std::size_t> component;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const std::size_t r = frontier.front();
      frontier.pop();
      component.push_back(r);
      for (std::size_t n : graph.neighbors(r)) {
        if (in_subset[n] && !seen[n]) {
          seen[n] = 1;
          frontier.push(n);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::vector<std::vector<std::size_t>> connected_components(const RoadGraph& graph) {
  std::vector<std::size_t> all(graph.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return connected_components(graph, all);
}

bool clusters_adjacent(const RoadGraph& graph, std::span<const std::size_t> a,
                       std::span<const std::size_t> b) {
  std::vector<std::uint8_t> in_b(graph.size(), 0);
  for (std::size_t r : b) in_b[r] = 1;
  for (std::size_t r : a)
    if (in_b[r])
      throw Error(ErrorKind::OverlappingClusters, "road " + graph.road(r) + " is in both clusters");
  for (std::size_t r : a)
    for (std::size_t n : graph.neighbors(r))
      if (in_b[n]) return true;
  return false;
}

std::vector<RoadEdge> read_edge_list(std::istream& in) {
  std::vector<RoadEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!seen_first) {
      seen_first = true;
      if (text == "road_a,road_b") continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw Error(ErrorKind::MalformedRow,
                  "edge list line " + std::to_string(line_no) + ": expected 2 columns");
    const auto a = trim(text.substr(0, comma));
    const auto b = trim(text.substr(comma + 1));
    if (a.empty() || b.empty())
      throw Error(ErrorKind::MalformedRow,
                  "edge list line " + std::to_string(line_no) + ": empty road id");
    edges.emplace_back(std::string(a), std::string(b));
  }
  return edges;
}

void write_edge_list(std::ostream& out, std::span<const RoadEdge> edges) {
  out << "road_a,road_b\n";
  for (const auto& [a, b] : edges) out << a << ',' << b << '\n';
}

std::vector<std::string> read_road_list(std::istream& in) {
  std::vector<std::string> roads;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (!text.empty()) roads.emplace_back(text);
  }
  return roads;
}

}  // namespace netpart
