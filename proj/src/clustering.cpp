#include "netpart/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include "netpart/error.hpp"

namespace netpart {

FeatureTable FeatureTable::from_rows(std::span<const std::vector<double>> rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  FeatureTable table(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim)
      throw Error(ErrorKind::LengthMismatch, "feature row " + std::to_string(i) + " has length " +
                                                 std::to_string(rows[i].size()) + ", expected " +
                                                 std::to_string(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(rows[i][j]))
        throw Error(ErrorKind::Format, "feature row " + std::to_string(i) + " is not finite");
      table.row(i)[j] = rows[i][j];
    }
  }
  return table;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::LengthMismatch, "vectors of length " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double linkage_distance(const FeatureTable& features, std::span<const std::size_t> a,
                        std::span<const std::size_t> b) {
  double sum = 0.0;
  for (std::size_t x : a)
    for (std::size_t y : b) sum += euclidean_distance(features.row(x), features.row(y));
  return sum / static_cast<double>(a.size() * b.size());
}

namespace {

struct Candidate {
  double distance;
  std::size_t a;
  std::size_t b;
  std::uint64_t version_a;
  std::uint64_t version_b;

  // Min-heap order: distance, then cluster names.
  bool operator>(const Candidate& o) const {
    return std::tie(distance, a, b) > std::tie(o.distance, o.a, o.b);
  }
};

struct ActiveCluster {
  std::vector<std::size_t> members;
  std::map<std::size_t, double> linkage;  // neighbour name -> average linkage
  std::uint64_t version = 0;
  bool alive = true;
};

}  // namespace

HierarchicalResult hierarchical_partition(const RoadGraph& graph, const FeatureTable& features,
                                          std::size_t k) {
  const std::size_t n = graph.size();
  if (features.rows() != n)
    throw Error(ErrorKind::MissingSeries, "feature table has " + std::to_string(features.rows()) +
                                              " rows for " + std::to_string(n) + " roads");
  if (k > n || k == 0)
    throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(k) + " with " + std::to_string(n) +
                                          " roads");
  const std::size_t components = connected_components(graph).size();
  if (k < components)
    throw Error(ErrorKind::KTooSmall, "k = " + std::to_string(k) + " but the network has " +
                                          std::to_string(components) +
                                          " connected components");

  std::vector<ActiveCluster> clusters(n);
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  for (std::size_t i = 0; i < n; ++i) clusters[i].members = {i};
  for (auto [a, b] : graph.edges()) {
    const double d = euclidean_distance(features.row(a), features.row(b));
    clusters[a].linkage[b] = d;
    clusters[b].linkage[a] = d;
    heap.push({d, a, b, 0, 0});
  }

  HierarchicalResult result;
  std::size_t count = n;
  while (count > k) {
    const Candidate top = heap.top();
    heap.pop();
    auto& ca = clusters[top.a];
    auto& cb = clusters[top.b];
    if (!ca.alive || !cb.alive || ca.version != top.version_a || cb.version != top.version_b)
      continue;

    const double size_a = static_cast<double>(ca.members.size());
    const double size_b = static_cast<double>(cb.members.size());
    std::map<std::size_t, double> merged;
    auto direct = [&](const ActiveCluster& from, std::size_t other) {
      return linkage_distance(features, from.members, clusters[other].members);
    };
    for (const auto& [c, d_ac] : ca.linkage) {
      if (c == top.b) continue;
      const auto it = cb.linkage.find(c);
      const double d_bc = it != cb.linkage.end() ? it->second : direct(cb, c);
      merged[c] = (size_a * d_ac + size_b * d_bc) / (size_a + size_b);
    }
    for (const auto& [c, d_bc] : cb.linkage) {
      if (c == top.a || merged.contains(c)) continue;
      merged[c] = (size_a * direct(ca, c) + size_b * d_bc) / (size_a + size_b);
    }

    ca.members.insert(ca.members.end(), cb.members.begin(), cb.members.end());
    std::sort(ca.members.begin(), ca.members.end());
    cb.members.clear();
    cb.linkage.clear();
    cb.alive = false;
    ++ca.version;
    result.trace.push_back({top.a, top.b, top.distance, ca.members.size()});

    for (const auto& [c, d] : merged) {
      auto& cc = clusters[c];
      cc.linkage.erase(top.a);
      cc.linkage.erase(top.b);
      cc.linkage[top.a] = d;
      const std::size_t lo = std::min(top.a, c);
      const std::size_t hi = std::max(top.a, c);
      heap.push({d, lo, hi, clusters[lo].version, clusters[hi].version});
    }
    ca.linkage = std::move(merged);
    --count;
  }
  result.clusters = partition_from_trace(n, result.trace, result.trace.size());
  return result;
}

ClusterSet partition_from_trace(std::size_t road_count, std::span<const MergeStep> trace,
                                std::size_t steps) {
  // Cluster names are the smallest member, so each road's label is found by
  // following absorbed names to their survivor.
  std::vector<std::size_t> parent(road_count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t s = 0; s < std::min(steps, trace.size()); ++s)
    parent[find(trace[s].cluster_b)] = find(trace[s].cluster_a);
  std::vector<std::size_t> labels(road_count);
  for (std::size_t r = 0; r < road_count; ++r) labels[r] = find(r);
  return ClusterSet::from_labels(labels);
}

double similarity(std::span<const double> p, std::span<const double> q, bool adjacent) {
  if (p.size() != q.size())
    throw Error(ErrorKind::LengthMismatch, "series of length " + std::to_string(p.size()) +
                                               " and " + std::to_string(q.size()));
  if (!adjacent) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return 1.0 / std::sqrt(sum + kSimilarityOffset);
}

Eigen::MatrixXd similarity_matrix(const RoadGraph& graph, const FeatureTable& series) {
  const std::size_t n = graph.size();
  if (series.rows() != n)
    throw Error(ErrorKind::MissingSeries, "series table has " + std::to_string(series.rows()) +
                                              " rows for " + std::to_string(n) + " roads");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto [a, b] : graph.edges()) {
    const double s = similarity(series.row(a), series.row(b), true);
    w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    w(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = s;
  }
  return w;
}

std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, std::size_t k,
                                const SpectralConfig& config) {
  const auto n = points.rows();
  const auto dim = points.cols();
  const auto kk = static_cast<Eigen::Index>(k);
  std::mt19937_64 rng(config.seed);

  std::vector<std::size_t> best_labels(static_cast<std::size_t>(n), 0);
  double best_inertia = std::numeric_limits<double>::infinity();

  for (std::size_t restart = 0; restart < std::max<std::size_t>(1, config.restarts); ++restart) {
    // k-means++ seeding.
    Eigen::MatrixXd centers(kk, dim);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centers.row(0) = points.row(pick(rng));
    Eigen::VectorXd nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Eigen::Index c = 1; c < kk; ++c) {
      const double total = nearest.sum();
      Eigen::Index chosen = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        for (chosen = 0; chosen + 1 < n; ++chosen) {
          target -= nearest(chosen);
          if (target <= 0.0) break;
        }
      } else {
        chosen = pick(rng);
      }
      centers.row(c) = points.row(chosen);
      nearest = nearest.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<std::size_t> labels(static_cast<std::size_t>(n), 0);
    double inertia = 0.0;
    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
      bool changed = iter == 0;
      inertia = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index arg = 0;
        const double d = (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&arg);
        inertia += d;
        if (labels[static_cast<std::size_t>(i)] != static_cast<std::size_t>(arg)) {
          labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(arg);
          changed = true;
        }
      }
      if (!changed) break;
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, dim);
      std::vector<std::size_t> counts(k, 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) += points.row(i);
        ++counts[labels[static_cast<std::size_t>(i)]];
      }
      for (Eigen::Index c = 0; c < kk; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
          centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        } else {
          // Re-seed an empty cluster at the point farthest from its center.
          Eigen::Index far = 0;
          Eigen::VectorXd dist(n);
          for (Eigen::Index i = 0; i < n; ++i)
            dist(i) = (points.row(i) -
                       centers.row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])))
                          .squaredNorm();
          dist.maxCoeff(&far);
          centers.row(c) = points.row(far);
        }
      }
    }
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best_labels = labels;
    }
  }
  return best_labels;
}

ClusterSet spectral_partition(const RoadGraph& graph, const FeatureTable& series, std::size_t k,
                              const SpectralConfig& config) {
  const std::size_t n = graph.size();
  if (k == 0 || k > n)
    throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(k) + " with " + std::to_string(n) +
                                          " roads");
  const Eigen::MatrixXd w = similarity_matrix(graph, series);
  const Eigen::VectorXd degree = w.rowwise().sum();
  for (std::size_t i = 0; i < n; ++i)
    if (!(degree(static_cast<Eigen::Index>(i)) > 0.0))
      throw Error(ErrorKind::IsolatedRoad, "road " + graph.road(i) + " has no similar neighbour");

  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  const auto nn = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd laplacian =
      Eigen::MatrixXd::Identity(nn, nn) - inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::Format, "eigen-decomposition of the Laplacian failed");

  Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }
  const auto labels = kmeans(embedding, k, config);
  return ClusterSet::from_labels(labels);
}

}  // namespace netpart
