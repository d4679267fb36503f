#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netpart/clustering.hpp"
#include "netpart/graph.hpp"

namespace netpart {

/// Sum over time slots of |p_t - q_t|.
double series_distance(std::span<const double> p, std::span<const double> q);

struct IntraResult {
  double value = 0.0;                 // unweighted mean over clusters
  std::vector<double> per_cluster;    // mean over ordered distinct pairs
};

/// Within-cluster homogeneity (lower is better). Singleton clusters score 0
/// and still count in the mean.
IntraResult intra(const ClusterSet& partition, const FeatureTable& series);

struct InterResult {
  double value = 0.0;
  std::size_t adjacent_pairs = 0;
};

/// Mean cross-pair distance between spatially adjacent clusters, averaged
/// over adjacent cluster pairs (higher is better). Throws NoAdjacentPairs.
InterResult inter(const ClusterSet& partition, const FeatureTable& series, const RoadGraph& graph);

/// Mean distance over all ordered distinct road pairs. Throws TooFewRoads.
double network_intra(const FeatureTable& series);

struct MetricsReport {
  std::size_t k = 0;
  std::string method;
  double intra = 0.0;
  std::optional<double> inter;  // empty when no two clusters touch
  double network_intra = 0.0;
  std::vector<double> per_cluster_intra;
  std::size_t adjacent_pair_count = 0;
};

MetricsReport evaluate_partition(const ClusterSet& partition, const FeatureTable& series,
                                 const RoadGraph& graph, std::string method);

/// Element-wise mean of reports sharing k and method (per-cluster values
/// averaged slot by slot; inter averaged over reports that have it).
MetricsReport mean_report(std::span<const MetricsReport> reports);

struct Comparison {
  std::size_t k = 0;
  double intra_improvement_pct = 0.0;  // positive when a's intra is lower
  std::optional<double> inter_improvement_pct;  // positive when a's inter is higher
};

/// Relative improvement of `a` over `b`. Throws KMismatch.
Comparison compare(const MetricsReport& a, const MetricsReport& b);

}  // namespace netpart
