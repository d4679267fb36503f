#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netpart/graph.hpp"
#include "netpart/ingest.hpp"

namespace netpart {

/// Daily speed template: a base speed with two Gaussian dips (slot units).
struct RegionProfile {
  double base_speed = 55.0;
  double morning_depth = 25.0;
  double evening_depth = 25.0;
  double morning_center = 96.0;
  double evening_center = 210.0;
  double width = 15.0;

  double speed_at(double slot) const;
};

/// Roads on a rows x cols grid with 4-neighbour adjacency, split into
/// region_count connected blocks that each follow one profile.
struct SynthScenario {
  std::size_t rows = 12;
  std::size_t cols = 12;
  std::size_t region_count = 4;
  std::vector<RegionProfile> region_profiles;  // empty: default tidal profiles
  double noise_sigma = 2.0;                    // km/h
  std::uint64_t seed = 1;
  std::size_t slots_per_day = kSlotsPerDay;
  std::size_t days = 1;
  Date first_date{std::chrono::year{2019}, std::chrono::month{9}, std::chrono::day{9}};
  bool embed_tidal_pair = false;
};

/// Distinct tidal shapes: inbound (morning-heavy), outbound (evening-heavy),
/// two-peak, midday; further regions reuse them with shifted peaks.
std::vector<RegionProfile> default_tidal_profiles(std::size_t region_count,
                                                  std::size_t slots_per_day = kSlotsPerDay);

/// Zero-noise template of a profile, one value per slot.
std::vector<double> profile_template(const RegionProfile& profile, std::size_t slots_per_day);

/// Two adjacent roads inside region 0; the second follows the time-reflected
/// region template, swapping its morning and evening dips.
struct TidalPair {
  std::size_t road_a = 0;
  std::size_t road_b = 0;
  std::vector<double> template_a;
  std::vector<double> template_b;
};

TidalPair tidal_pair(const SynthScenario& scenario);

struct SynthData {
  RoadGraph graph;
  /// Day-major: series[day * road_count + road].
  std::vector<DailySeries> series;
  ClusterSet truth;
  std::optional<TidalPair> tidal;

  std::size_t road_count() const { return graph.size(); }
  const DailySeries& at(std::size_t day, std::size_t road) const {
    return series[day * graph.size() + road];
  }
};

/// Throws InvalidScenario.
SynthData generate(const SynthScenario& scenario);

/// Region label of every grid cell, row-major.
std::vector<std::size_t> region_layout(const SynthScenario& scenario);

/// Flattens generated series into speed records (0-based periods).
std::vector<SpeedRecord> to_records(const SynthData& data);

/// Adjusted Rand index; 1 for identical partitions up to relabelling.
/// Throws UniverseMismatch.
double adjusted_rand_index(const ClusterSet& found, const ClusterSet& truth);

}  // namespace netpart
