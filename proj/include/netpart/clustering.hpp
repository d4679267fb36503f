#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netpart/graph.hpp"

namespace netpart {

/// One feature vector per road, aligned with the graph's road indices.
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

  /// Validates uniform length and finiteness.
  static FeatureTable from_rows(std::span<const std::vector<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Mean Euclidean distance over all cross pairs (average linkage).
double linkage_distance(const FeatureTable& features, std::span<const std::size_t> a,
                        std::span<const std::size_t> b);

/// A merge of two clusters, each named by its smallest road index
/// (cluster_a < cluster_b). The merged cluster keeps the name cluster_a.
struct MergeStep {
  std::size_t cluster_a = 0;
  std::size_t cluster_b = 0;
  double distance = 0.0;
  std::size_t merged_size = 0;
};

using MergeTrace = std::vector<MergeStep>;

struct HierarchicalResult {
  ClusterSet clusters;
  MergeTrace trace;
};

/// Agglomerative clustering where only adjacent clusters may merge. Each
/// round merges the adjacent pair with the smallest average linkage; ties go
/// to the smallest (cluster_a, cluster_b). Every returned cluster is connected.
/// Throws KTooSmall when k is below the component count, KTooLarge when
/// k > |V|.
HierarchicalResult hierarchical_partition(const RoadGraph& graph, const FeatureTable& features,
                                          std::size_t k);

/// Clusters after replaying the first `steps` merges of a trace over
/// `road_count` singletons.
ClusterSet partition_from_trace(std::size_t road_count, std::span<const MergeStep> trace,
                                std::size_t steps);

/// Regulariser inside the similarity's square root.
inline constexpr double kSimilarityOffset = 0.1;

/// 1 / sqrt(sum (p - q)^2 + 0.1) for adjacent roads, 0 otherwise.
double similarity(std::span<const double> p, std::span<const double> q, bool adjacent);

/// Symmetric similarity matrix over the graph, zero off the adjacency pattern
/// and on the diagonal.
Eigen::MatrixXd similarity_matrix(const RoadGraph& graph, const FeatureTable& series);

struct SpectralConfig {
  std::uint64_t seed = 42;
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

/// Normalised-Laplacian spectral clustering on the masked similarity:
/// L = I - D^-1/2 W D^-1/2, embed by the k smallest eigenvectors with rows
/// normalised, then seeded k-means (best inertia over restarts). Clusters
/// are not forced to be connected. Throws IsolatedRoad for a zero-degree row.
ClusterSet spectral_partition(const RoadGraph& graph, const FeatureTable& series, std::size_t k,
                              const SpectralConfig& config = {});

/// Lloyd's k-means with k-means++ seeding; returns labels, best of restarts.
std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, std::size_t k,
                                const SpectralConfig& config);

}  // namespace netpart
