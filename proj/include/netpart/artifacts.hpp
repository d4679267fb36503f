#pragma once

#include <string>

#include "json.hpp"
#include "netpart/clustering.hpp"
#include "netpart/graph.hpp"
#include "netpart/metrics.hpp"
#include "netpart/synth.hpp"

namespace netpart {

using Json = nlohmann::ordered_json;

/// {"k": int, "method": str, "assignment": {road_id: cluster_index}}
Json partition_to_json(const RoadGraph& graph, const ClusterSet& clusters,
                       const std::string& method);

/// Reads a partition over `graph`'s roads. Throws UniverseMismatch when the
/// road sets differ and Format on malformed content.
ClusterSet partition_from_json(const Json& json, const RoadGraph& graph);

/// {"k", "method", "intra", "inter", "network_intra", "per_cluster_intra",
///  "adjacent_pair_count"}; inter is null when no clusters touch.
Json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const Json& json);

Json scenario_to_json(const SynthScenario& scenario);
SynthScenario scenario_from_json(const Json& json);

/// Copies a road geometry FeatureCollection, keeping features whose
/// properties.road_id is in the graph and adding a "cluster" property.
Json annotate_geojson(const Json& geometry, const RoadGraph& graph, const ClusterSet& clusters);

}  // namespace netpart
