#pragma once

// Test-only reference computations. Nothing here calls the code paths it is
// used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "netpart/autoencoder.hpp"
#include "netpart/conv.hpp"
#include "netpart/graph.hpp"

namespace netpart::oracle {

// ---------------------------------------------------------------------------
// Finite differences

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

/// Central difference of `loss` w.r.t. `param`, restoring it afterwards.
inline double central_difference(double& param, const std::function<double()>& loss,
                                 double eps = 1e-5) {
  const double saved = param;
  param = saved + eps;
  const double up = loss();
  param = saved - eps;
  const double down = loss();
  param = saved;
  return (up - down) / (2.0 * eps);
}

struct GradCheckSummary {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst = 0.0;
};

/// Checks every parameter gradient of a whole autoencoder against central
/// differences of its squared reconstruction error on `image`. The difference
/// L(p + eps) - L(p - eps) is accumulated pixel by pixel in long double so
/// small gradients are not swamped by rounding in the two loss totals.
inline GradCheckSummary check_model_gradients(AutoencoderModel model, const Tensor& image,
                                              double tolerance, double eps = 1e-5) {
  const ModelGradients analytic = loss_gradient(model, image);
  auto numeric = [&](double& param) {
    const double saved = param;
    param = saved + eps;
    const Tensor up = reconstruct(model, image);
    param = saved - eps;
    const Tensor down = reconstruct(model, image);
    param = saved;
    long double diff = 0.0L;
    for (std::size_t i = 0; i < image.size(); ++i) {
      const long double a = static_cast<long double>(up[i]) - image[i];
      const long double b = static_cast<long double>(down[i]) - image[i];
      diff += a * a - b * b;
    }
    return static_cast<double>(diff / (2.0L * eps));
  };
  std::vector<ConvLayer*> layers;
  for (auto& l : model.encoder) layers.push_back(&l);
  for (auto& l : model.decoder) layers.push_back(&l);
  GradCheckSummary s;
  auto record = [&](double a, double n) {
    const double err = relative_error(a, n);
    s.worst = std::max(s.worst, err);
    ++s.checked;
    if (err > tolerance) ++s.failures;
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = 0; i < layers[l]->kernels.size(); ++i)
      record(analytic.kernels[l][i], numeric(layers[l]->kernels[i]));
    for (std::size_t i = 0; i < layers[l]->bias.size(); ++i)
      record(analytic.bias[l][i], numeric(layers[l]->bias[i]));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Metrics, straight from the definitions with ordered pairs.

inline double abs_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) s += std::abs(p[t] - q[t]);
  return s;
}

inline double intra(const std::vector<std::size_t>& labels, std::size_t k,
                    const std::vector<std::vector<double>>& series) {
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double sum = 0.0;
    double size = 0.0;
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (labels[p] != c) continue;
      size += 1.0;
      for (std::size_t q = 0; q < labels.size(); ++q)
        if (q != p && labels[q] == c) sum += abs_distance(series[p], series[q]);
    }
    total += size > 1.0 ? sum / (size * (size - 1.0)) : 0.0;
  }
  return total / static_cast<double>(k);
}

/// NaN when no adjacent cluster pair exists.
inline double inter(const std::vector<std::size_t>& labels, std::size_t k,
                    const std::vector<std::vector<double>>& series,
                    const std::vector<std::vector<bool>>& adjacency) {
  double total = 0.0;
  double pairs = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      bool touching = false;
      double sum = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] == a) na += 1.0;
        if (labels[p] == b) nb += 1.0;
        for (std::size_t q = 0; q < labels.size(); ++q) {
          if (labels[p] != a || labels[q] != b) continue;
          sum += abs_distance(series[p], series[q]);
          if (adjacency[p][q]) touching = true;
        }
      }
      if (!touching) continue;
      total += sum / (na * nb);
      pairs += 1.0;
    }
  }
  return pairs > 0.0 ? total / pairs : std::numeric_limits<double>::quiet_NaN();
}

inline double network_intra(const std::vector<std::vector<double>>& series) {
  double sum = 0.0;
  const double m = static_cast<double>(series.size());
  for (std::size_t p = 0; p < series.size(); ++p)
    for (std::size_t q = 0; q < series.size(); ++q)
      if (p != q) sum += abs_distance(series[p], series[q]);
  return sum / (m * (m - 1.0));
}

// ---------------------------------------------------------------------------
// Exhaustive partitions of small graphs.

inline bool block_connected(const std::vector<std::vector<bool>>& adjacency,
                            const std::vector<std::size_t>& block) {
  if (block.empty()) return false;
  std::vector<std::size_t> reached{block.front()};
  std::vector<bool> seen(adjacency.size(), false);
  seen[block.front()] = true;
  for (std::size_t i = 0; i < reached.size(); ++i)
    for (std::size_t v : block)
      if (!seen[v] && adjacency[reached[i]][v]) {
        seen[v] = true;
        reached.push_back(v);
      }
  return reached.size() == block.size();
}

/// Calls visit(labels) for every partition of n items into exactly k
/// non-empty blocks whose induced subgraphs are connected.
inline void for_each_connected_partition(
    const std::vector<std::vector<bool>>& adjacency, std::size_t k,
    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> labels(n, 0);
  // Restricted growth strings enumerate set partitions without repeats.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (used + (n - i) < k) return;
    if (i == n) {
      if (used != k) return;
      std::vector<std::vector<std::size_t>> blocks(k);
      for (std::size_t v = 0; v < n; ++v) blocks[labels[v]].push_back(v);
      for (const auto& b : blocks)
        if (!block_connected(adjacency, b)) return;
      visit(labels);
      return;
    }
    for (std::size_t l = 0; l <= used && l < k; ++l) {
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  rec(0, 0);
}

inline std::vector<std::vector<bool>> adjacency_of(const RoadGraph& graph) {
  std::vector<std::vector<bool>> adj(graph.size(), std::vector<bool>(graph.size(), false));
  for (auto [a, b] : graph.edges()) adj[a][b] = adj[b][a] = true;
  return adj;
}

/// Sum over clusters of pairwise Euclidean distances inside the cluster.
inline double within_cluster_total(const std::vector<std::size_t>& labels,
                                   const std::vector<std::vector<double>>& features) {
  double total = 0.0;
  for (std::size_t p = 0; p < labels.size(); ++p)
    for (std::size_t q = p + 1; q < labels.size(); ++q) {
      if (labels[p] != labels[q]) continue;
      double s = 0.0;
      for (std::size_t d = 0; d < features[p].size(); ++d)
        s += (features[p][d] - features[q][d]) * (features[p][d] - features[q][d]);
      total += std::sqrt(s);
    }
  return total;
}

}  // namespace netpart::oracle
