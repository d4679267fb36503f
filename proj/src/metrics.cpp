#include "netpart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netpart/error.hpp"

namespace netpart {
namespace {

void check_coverage(const ClusterSet& partition, const FeatureTable& series) {
  if (series.rows() != partition.assignment.size())
    throw Error(ErrorKind::MissingSeries, "partition covers " +
                                              std::to_string(partition.assignment.size()) +
                                              " roads but " + std::to_string(series.rows()) +
                                              " series were supplied");
}

double relative_change(double numerator, double base) {
  if (base == 0.0) return numerator == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), numerator);
  return 100.0 * numerator / base;
}

}  // namespace

double series_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw Error(ErrorKind::LengthMismatch, "series of length " + std::to_string(p.size()) +
                                               " and " + std::to_string(q.size()));
  double sum = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) sum += std::abs(p[t] - q[t]);
  return sum;
}

IntraResult intra(const ClusterSet& partition, const FeatureTable& series) {
  check_coverage(partition, series);
  IntraResult result;
  const auto members = partition.members();
  for (const auto& cluster : members) {
    const std::size_t m = cluster.size();
    double value = 0.0;
    if (m > 1) {
      double unordered = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          unordered += series_distance(series.row(cluster[i]), series.row(cluster[j]));
      value = 2.0 * unordered / static_cast<double>(m * (m - 1));
    }
    result.per_cluster.push_back(value);
  }
  double total = 0.0;
  for (double v : result.per_cluster) total += v;
  result.value = members.empty() ? 0.0 : total / static_cast<double>(members.size());
  return result;
}

InterResult inter(const ClusterSet& partition, const FeatureTable& series, const RoadGraph& graph) {
  check_coverage(partition, series);
  if (graph.size() != partition.assignment.size())
    throw Error(ErrorKind::MissingSeries, "graph and partition cover different road counts");
  const auto members = partition.members();
  InterResult result;
  double total = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (!clusters_adjacent(graph, members[a], members[b])) continue;
      double sum = 0.0;
      for (std::size_t p : members[a])
        for (std::size_t q : members[b]) sum += series_distance(series.row(p), series.row(q));
      total += sum / static_cast<double>(members[a].size() * members[b].size());
      ++result.adjacent_pairs;
    }
  }
  if (result.adjacent_pairs == 0)
    throw Error(ErrorKind::NoAdjacentPairs, "no two clusters of the partition are adjacent");
  result.value = total / static_cast<double>(result.adjacent_pairs);
  return result;
}

double network_intra(const FeatureTable& series) {
  const std::size_t m = series.rows();
  if (m < 2) throw Error(ErrorKind::TooFewRoads, "need at least 2 roads, got " + std::to_string(m));
  double unordered = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) unordered += series_distance(series.row(i), series.row(j));
  return 2.0 * unordered / static_cast<double>(m * (m - 1));
}

MetricsReport evaluate_partition(const ClusterSet& partition, const FeatureTable& series,
                                 const RoadGraph& graph, std::string method) {
  MetricsReport report;
  report.k = partition.k;
  report.method = std::move(method);
  auto in = intra(partition, series);
  report.intra = in.value;
  report.per_cluster_intra = std::move(in.per_cluster);
  try {
    const auto out = inter(partition, series, graph);
    report.inter = out.value;
    report.adjacent_pair_count = out.adjacent_pairs;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoAdjacentPairs) throw;
  }
  report.network_intra = network_intra(series);
  return report;
}

MetricsReport mean_report(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw Error(ErrorKind::TooFewRoads, "no reports to average");
  MetricsReport mean = reports.front();
  const double count = static_cast<double>(reports.size());
  mean.intra = 0.0;
  mean.network_intra = 0.0;
  std::fill(mean.per_cluster_intra.begin(), mean.per_cluster_intra.end(), 0.0);
  double inter_sum = 0.0;
  std::size_t inter_count = 0;
  for (const auto& r : reports) {
    if (r.k != mean.k) throw Error(ErrorKind::KMismatch, "averaging reports with different k");
    mean.intra += r.intra / count;
    mean.network_intra += r.network_intra / count;
    for (std::size_t c = 0; c < mean.per_cluster_intra.size(); ++c)
      mean.per_cluster_intra[c] += r.per_cluster_intra[c] / count;
    if (r.inter) {
      inter_sum += *r.inter;
      ++inter_count;
    }
  }
  mean.inter.reset();
  if (inter_count > 0) mean.inter = inter_sum / static_cast<double>(inter_count);
  return mean;
}

Comparison compare(const MetricsReport& a, const MetricsReport& b) {
  if (a.k != b.k)
    throw Error(ErrorKind::KMismatch, "comparing k = " + std::to_string(a.k) + " with k = " +
                                          std::to_string(b.k));
  Comparison c;
  c.k = a.k;
  c.intra_improvement_pct = relative_change(b.intra - a.intra, b.intra);
  if (a.inter && b.inter) c.inter_improvement_pct = relative_change(*a.inter - *b.inter, *b.inter);
  return c;
}

}  // namespace netpart
