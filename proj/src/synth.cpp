#include "netpart/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "netpart/error.hpp"

namespace netpart {
namespace {

void validate(const SynthScenario& s) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidScenario, what); };
  if (s.rows == 0 || s.cols == 0) fail("grid must be at least 1 x 1");
  if (s.region_count == 0 || s.region_count > s.rows * s.cols)
    fail("region_count must be in [1, rows*cols]");
  if (!(s.noise_sigma >= 0.0) || !std::isfinite(s.noise_sigma)) fail("noise_sigma must be >= 0");
  if (s.slots_per_day < 2) fail("slots_per_day must be >= 2");
  if (s.days == 0) fail("days must be >= 1");
  if (!s.region_profiles.empty() && s.region_profiles.size() < s.region_count)
    fail("fewer region profiles than regions");
  for (const auto& p : s.region_profiles)
    if (!(p.width > 0.0) || !(p.base_speed > 0.0)) fail("profile width and base speed must be > 0");
}

std::vector<RegionProfile> profiles_for(const SynthScenario& s) {
  return s.region_profiles.empty() ? default_tidal_profiles(s.region_count, s.slots_per_day)
                                   : s.region_profiles;
}

std::string road_name(std::size_t index) { return std::to_string(index); }

}  // namespace

double RegionProfile::speed_at(double slot) const {
  auto dip = [&](double center) {
    const double z = (slot - center) / width;
    return std::exp(-0.5 * z * z);
  };
  return base_speed - morning_depth * dip(morning_center) - evening_depth * dip(evening_center);
}

std::vector<RegionProfile> default_tidal_profiles(std::size_t region_count,
                                                  std::size_t slots_per_day) {
  const double scale = static_cast<double>(slots_per_day) / static_cast<double>(kSlotsPerDay);
  // base, morning depth, evening depth, morning center, evening center, width
  const RegionProfile shapes[] = {
      {55.0, 30.0, 8.0, 96.0, 210.0, 15.0},   // inbound
      {55.0, 8.0, 30.0, 96.0, 210.0, 15.0},   // outbound
      {55.0, 22.0, 22.0, 96.0, 210.0, 15.0},  // both peaks
      {55.0, 25.0, 10.0, 150.0, 230.0, 22.0}, // midday
  };
  std::vector<RegionProfile> out;
  for (std::size_t r = 0; r < region_count; ++r) {
    RegionProfile p = shapes[r % 4];
    const double shift = 12.0 * static_cast<double>(r / 4);
    p.morning_center = (p.morning_center + shift) * scale;
    p.evening_center = (p.evening_center - shift) * scale;
    p.width *= scale;
    out.push_back(p);
  }
  return out;
}

std::vector<double> profile_template(const RegionProfile& profile, std::size_t slots_per_day) {
  std::vector<double> v(slots_per_day);
  for (std::size_t t = 0; t < slots_per_day; ++t) v[t] = profile.speed_at(static_cast<double>(t));
  return v;
}

std::vector<std::size_t> region_layout(const SynthScenario& s) {
  validate(s);
  std::vector<std::size_t> labels(s.rows * s.cols, 0);
  // Prefer a block grid br x bc = region_count that fits, as square as possible.
  std::size_t best_br = 0;
  for (std::size_t br = 1; br <= s.region_count; ++br) {
    if (s.region_count % br != 0) continue;
    const std::size_t bc = s.region_count / br;
    if (br > s.rows || bc > s.cols) continue;
    if (best_br == 0 || std::max(br, bc) - std::min(br, bc) <
                            std::max(best_br, s.region_count / best_br) -
                                std::min(best_br, s.region_count / best_br))
      best_br = br;
  }
  if (best_br != 0) {
    const std::size_t bc = s.region_count / best_br;
    for (std::size_t r = 0; r < s.rows; ++r)
      for (std::size_t c = 0; c < s.cols; ++c)
        labels[r * s.cols + c] = (r * best_br / s.rows) * bc + (c * bc / s.cols);
    return labels;
  }
  // Otherwise cut the boustrophedon ordering into equal runs; consecutive
  // cells in that ordering are grid neighbours, so each run is connected.
  const std::size_t total = s.rows * s.cols;
  std::size_t position = 0;
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t i = 0; i < s.cols; ++i, ++position) {
      const std::size_t c = r % 2 == 0 ? i : s.cols - 1 - i;
      labels[r * s.cols + c] = position * s.region_count / total;
    }
  }
  return labels;
}

TidalPair tidal_pair(const SynthScenario& scenario) {
  const auto labels = region_layout(scenario);
  const auto profiles = profiles_for(scenario);
  // Region 0 cell closest to the region's centroid that has a region-0
  // neighbour to its right or below.
  double cy = 0.0, cx = 0.0, count = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 0) {
      cy += static_cast<double>(i / scenario.cols);
      cx += static_cast<double>(i % scenario.cols);
      count += 1.0;
    }
  cy /= count;
  cx /= count;
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_dist = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) continue;
    const std::size_t r = i / scenario.cols, c = i % scenario.cols;
    std::optional<std::size_t> partner;
    if (c + 1 < scenario.cols && labels[i + 1] == 0) partner = i + 1;
    else if (r + 1 < scenario.rows && labels[i + scenario.cols] == 0) partner = i + scenario.cols;
    if (!partner) continue;
    const double d = std::hypot(static_cast<double>(r) - cy, static_cast<double>(c) - cx);
    if (!best || d < best_dist) {
      best = {i, *partner};
      best_dist = d;
    }
  }
  if (!best) throw Error(ErrorKind::InvalidScenario, "region 0 has no two adjacent roads");

  TidalPair pair;
  pair.road_a = best->first;
  pair.road_b = best->second;
  pair.template_a = profile_template(profiles[0], scenario.slots_per_day);
  pair.template_b.assign(pair.template_a.rbegin(), pair.template_a.rend());
  return pair;
}

SynthData generate(const SynthScenario& scenario) {
  const auto labels = region_layout(scenario);
  const auto profiles = profiles_for(scenario);
  const std::size_t n = scenario.rows * scenario.cols;

  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = road_name(i);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t r = 0; r < scenario.rows; ++r)
    for (std::size_t c = 0; c < scenario.cols; ++c) {
      const std::size_t i = r * scenario.cols + c;
      if (c + 1 < scenario.cols) edges.emplace_back(i, i + 1);
      if (r + 1 < scenario.rows) edges.emplace_back(i, i + scenario.cols);
    }

  SynthData data;
  data.graph = RoadGraph::from_indices(std::move(names), edges);
  data.truth = ClusterSet::from_labels(labels);
  if (scenario.embed_tidal_pair) data.tidal = tidal_pair(scenario);

  std::vector<std::vector<double>> templates;
  for (std::size_t r = 0; r < scenario.region_count; ++r)
    templates.push_back(profile_template(profiles[r], scenario.slots_per_day));

  const auto days = std::chrono::sys_days{scenario.first_date};
  for (std::size_t day = 0; day < scenario.days; ++day) {
    const Date date{days + std::chrono::days{static_cast<int>(day)}};
    for (std::size_t road = 0; road < n; ++road) {
      const std::vector<double>* base = &templates[labels[road]];
      if (data.tidal && road == data.tidal->road_b) base = &data.tidal->template_b;
      std::seed_seq seq{static_cast<std::uint64_t>(scenario.seed), static_cast<std::uint64_t>(day),
                        static_cast<std::uint64_t>(road)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> noise(0.0, 1.0);
      DailySeries s;
      s.road_id = data.graph.road(road);
      s.date = date;
      s.values.resize(scenario.slots_per_day);
      s.imputed_mask.assign(scenario.slots_per_day, false);
      for (std::size_t t = 0; t < scenario.slots_per_day; ++t) {
        const double eps = scenario.noise_sigma > 0.0 ? scenario.noise_sigma * noise(rng) : 0.0;
        s.values[t] = std::max(1.0, (*base)[t] + eps);
      }
      data.series.push_back(std::move(s));
    }
  }
  return data;
}

std::vector<SpeedRecord> to_records(const SynthData& data) {
  std::vector<SpeedRecord> records;
  for (const auto& s : data.series)
    for (std::size_t t = 0; t < s.values.size(); ++t)
      records.push_back({s.date, t, s.road_id, s.values[t], 20});
  return records;
}

double adjusted_rand_index(const ClusterSet& found, const ClusterSet& truth) {
  if (found.assignment.size() != truth.assignment.size())
    throw Error(ErrorKind::UniverseMismatch, "partitions cover " +
                                                 std::to_string(found.assignment.size()) + " and " +
                                                 std::to_string(truth.assignment.size()) + " roads");
  const std::size_t n = found.assignment.size();
  auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    table[{found.assignment[i], truth.assignment[i]}] += 1.0;
    rows[found.assignment[i]] += 1.0;
    cols[truth.assignment[i]] += 1.0;
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += choose2(count);
  for (const auto& [key, count] : rows) sum_rows += choose2(count);
  for (const auto& [key, count] : cols) sum_cols += choose2(count);
  const double total = choose2(static_cast<double>(n));
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace netpart
