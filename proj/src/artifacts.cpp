#include "netpart/artifacts.hpp"

#include "netpart/error.hpp"

namespace netpart {

Json partition_to_json(const RoadGraph& graph, const ClusterSet& clusters,
                       const std::string& method) {
  Json assignment = Json::object();
  for (std::size_t r = 0; r < graph.size(); ++r) assignment[graph.road(r)] = clusters.assignment[r];
  Json out;
  out["k"] = clusters.k;
  out["method"] = method;
  out["assignment"] = std::move(assignment);
  return out;
}

ClusterSet partition_from_json(const Json& json, const RoadGraph& graph) {
  try {
    const auto& assignment = json.at("assignment");
    if (assignment.size() != graph.size())
      throw Error(ErrorKind::UniverseMismatch, "partition lists " +
                                                   std::to_string(assignment.size()) +
                                                   " roads, network has " +
                                                   std::to_string(graph.size()));
    std::vector<std::size_t> labels(graph.size());
    for (std::size_t r = 0; r < graph.size(); ++r) {
      const auto it = assignment.find(graph.road(r));
      if (it == assignment.end())
        throw Error(ErrorKind::UniverseMismatch, "partition has no entry for road " + graph.road(r));
      labels[r] = it->get<std::size_t>();
    }
    return ClusterSet::from_labels(labels);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("partition JSON: ") + e.what());
  }
}

Json report_to_json(const MetricsReport& report) {
  Json out;
  out["k"] = report.k;
  out["method"] = report.method;
  out["intra"] = report.intra;
  out["inter"] = report.inter ? Json(*report.inter) : Json(nullptr);
  out["network_intra"] = report.network_intra;
  out["per_cluster_intra"] = report.per_cluster_intra;
  out["adjacent_pair_count"] = report.adjacent_pair_count;
  return out;
}

MetricsReport report_from_json(const Json& json) {
  try {
    MetricsReport r;
    r.k = json.at("k").get<std::size_t>();
    r.method = json.at("method").get<std::string>();
    r.intra = json.at("intra").get<double>();
    if (!json.at("inter").is_null()) r.inter = json.at("inter").get<double>();
    r.network_intra = json.at("network_intra").get<double>();
    r.per_cluster_intra = json.at("per_cluster_intra").get<std::vector<double>>();
    r.adjacent_pair_count = json.at("adjacent_pair_count").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("metrics JSON: ") + e.what());
  }
}

Json scenario_to_json(const SynthScenario& s) {
  Json profiles = Json::array();
  for (const auto& p : s.region_profiles)
    profiles.push_back({{"base_speed", p.base_speed},
                        {"morning_depth", p.morning_depth},
                        {"evening_depth", p.evening_depth},
                        {"morning_center", p.morning_center},
                        {"evening_center", p.evening_center},
                        {"width", p.width}});
  Json out;
  out["rows"] = s.rows;
  out["cols"] = s.cols;
  out["region_count"] = s.region_count;
  out["region_profiles"] = std::move(profiles);
  out["noise_sigma"] = s.noise_sigma;
  out["seed"] = s.seed;
  out["slots_per_day"] = s.slots_per_day;
  out["days"] = s.days;
  out["first_date"] = format_date(s.first_date);
  out["embed_tidal_pair"] = s.embed_tidal_pair;
  return out;
}

SynthScenario scenario_from_json(const Json& json) {
  try {
    SynthScenario s;
    s.rows = json.value("rows", s.rows);
    s.cols = json.value("cols", s.cols);
    s.region_count = json.value("region_count", s.region_count);
    s.noise_sigma = json.value("noise_sigma", s.noise_sigma);
    s.seed = json.value("seed", s.seed);
    s.slots_per_day = json.value("slots_per_day", s.slots_per_day);
    s.days = json.value("days", s.days);
    s.embed_tidal_pair = json.value("embed_tidal_pair", s.embed_tidal_pair);
    if (json.contains("first_date")) {
      const auto date = parse_date(json.at("first_date").get<std::string>());
      if (!date) throw Error(ErrorKind::InvalidScenario, "first_date must be YYYYMMDD");
      s.first_date = *date;
    }
    if (json.contains("region_profiles")) {
      for (const auto& p : json.at("region_profiles")) {
        RegionProfile profile;
        profile.base_speed = p.value("base_speed", profile.base_speed);
        profile.morning_depth = p.value("morning_depth", profile.morning_depth);
        profile.evening_depth = p.value("evening_depth", profile.evening_depth);
        profile.morning_center = p.value("morning_center", profile.morning_center);
        profile.evening_center = p.value("evening_center", profile.evening_center);
        profile.width = p.value("width", profile.width);
        s.region_profiles.push_back(profile);
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidScenario, std::string("scenario JSON: ") + e.what());
  }
}

Json annotate_geojson(const Json& geometry, const RoadGraph& graph, const ClusterSet& clusters) {
  try {
    Json out;
    out["type"] = "FeatureCollection";
    out["features"] = Json::array();
    for (const auto& feature : geometry.at("features")) {
      const auto& props = feature.at("properties");
      const auto& id = props.at("road_id");
      const std::string road = id.is_string() ? id.get<std::string>() : id.dump();
      const auto index = graph.index_of(road);
      if (!index) continue;
      Json copy = feature;
      copy["properties"]["cluster"] = clusters.assignment[*index];
      out["features"].push_back(std::move(copy));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("geometry GeoJSON: ") + e.what());
  }
}

}  // namespace netpart
