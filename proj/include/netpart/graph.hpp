#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netpart {

using RoadEdge = std::pair<std::string, std::string>;

/// Roads are nodes; two roads meeting at an intersection share an undirected
/// edge. Road indices follow the order given to build().
class RoadGraph {
 public:
  RoadGraph() = default;

  /// Throws DuplicateRoad, UnknownEndpoint or SelfLoop. Repeated and
  /// reversed edges collapse into one.
  static RoadGraph build(std::vector<std::string> roads, std::span<const RoadEdge> edges);

  /// Index-based construction for generated networks.
  static RoadGraph from_indices(std::vector<std::string> roads,
                                std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const noexcept { return roads_.size(); }
  const std::vector<std::string>& roads() const noexcept { return roads_; }
  const std::string& road(std::size_t index) const { return roads_.at(index); }
  std::optional<std::size_t> index_of(std::string_view road_id) const;

  /// Sorted neighbour indices.
  std::span<const std::size_t> neighbors(std::size_t index) const { return neighbors_[index]; }
  std::size_t degree(std::size_t index) const { return neighbors_[index].size(); }
  bool adjacent(std::size_t a, std::size_t b) const;

  /// Undirected edges as (lower, higher) index pairs, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }

  /// The 0-1 adjacency matrix, row-major n x n, derived from the edge set.
  std::vector<std::uint8_t> adjacency_matrix() const;

 private:
  std::vector<std::string> roads_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// Dense assignment of every road (by graph index) to a cluster in [0, k).
struct ClusterSet {
  std::vector<std::size_t> assignment;
  std::size_t k = 0;

  /// Member road indices of each cluster, ascending.
  std::vector<std::vector<std::size_t>> members() const;

  /// Relabels clusters in order of first appearance; validates density.
  static ClusterSet from_labels(std::span<const std::size_t> labels);

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

/// Maximal connected groups of the subgraph induced by `subset`, each sorted,
/// ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const RoadGraph& graph,
                                                           std::span<const std::size_t> subset);
std::vector<std::vector<std::size_t>> connected_components(const RoadGraph& graph);

/// True iff some road of `a` neighbours some road of `b`. Throws
/// OverlappingClusters if the sets share a road.
bool clusters_adjacent(const RoadGraph& graph, std::span<const std::size_t> a,
                       std::span<const std::size_t> b);

/// Edge list CSV with header `road_a,road_b`.
std::vector<RoadEdge> read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, std::span<const RoadEdge> edges);

/// One road id per line.
std::vector<std::string> read_road_list(std::istream& in);

}  // namespace netpart
