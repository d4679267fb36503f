#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "netpart/artifacts.hpp"
#include "netpart/autoencoder.hpp"
#include "netpart/clustering.hpp"
#include "netpart/error.hpp"
#include "netpart/gaf.hpp"
#include "netpart/graph.hpp"
#include "netpart/ingest.hpp"
#include "netpart/metrics.hpp"
#include "netpart/parallel.hpp"
#include "netpart/pipeline.hpp"
#include "netpart/synth.hpp"

namespace netpart::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string records;
  std::string edges;
  std::string roads;
  std::string out = ".";
  std::size_t period_base = 0;
  std::size_t paa = 0;  // 0: no downsampling
  std::size_t epochs = 200;
  std::size_t batch = 4;
  double lr = TrainConfig{}.learning_rate;
  std::uint64_t seed = 42;
  std::string method = "ae-hier";
  std::string k = "2";
  std::string date = "all";
  std::string geometry;
  std::size_t threads = 0;
  std::string scenario;
  std::string gaf_dir;
  std::string model;
  std::string features;
};

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ifstream open_in(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorKind::Io, std::string("missing --") + what + " path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, std::string("cannot read ") + what + " file '" + path + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const Json& json) {
  auto out = open_out(path);
  out << json.dump(2) << '\n';
}

Json read_json(const std::string& path, const char* what) {
  auto in = open_in(path, what);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Format, path + ": " + e.what());
  }
}

std::vector<SpeedRecord> load_records(const Options& o) {
  auto in = open_in(o.records, "records");
  try {
    return parse_records(in, RecordFormat{o.period_base, kSlotsPerDay});
  } catch (const Error& e) {
    throw Error(e.kind(), o.records + ": " + e.what());
  }
}

/// Road universe: the --roads list when given, otherwise edge endpoints in
/// order of first appearance followed by `extra` roads not yet seen.
RoadGraph load_graph(const Options& o, std::span<const std::string> extra = {}) {
  auto in = open_in(o.edges, "edges");
  std::vector<RoadEdge> edges;
  try {
    edges = read_edge_list(in);
  } catch (const Error& e) {
    throw Error(e.kind(), o.edges + ": " + e.what());
  }
  std::vector<std::string> roads;
  if (!o.roads.empty()) {
    auto rin = open_in(o.roads, "roads");
    roads = read_road_list(rin);
  } else {
    std::set<std::string> seen;
    auto add = [&](const std::string& r) {
      if (seen.insert(r).second) roads.push_back(r);
    };
    for (const auto& [a, b] : edges) {
      add(a);
      add(b);
    }
    for (const auto& r : extra) add(r);
  }
  return RoadGraph::build(std::move(roads), edges);
}

std::vector<std::string> record_roads(std::span<const SpeedRecord> records) {
  std::vector<std::string> roads;
  std::set<std::string> seen;
  for (const auto& r : records)
    if (seen.insert(r.road_id).second) roads.push_back(r.road_id);
  return roads;
}

std::optional<Date> date_filter(const Options& o) {
  if (o.date == "all") return std::nullopt;
  const auto d = parse_date(o.date);
  if (!d) throw Error(ErrorKind::Format, "bad --date '" + o.date + "', expected YYYYMMDD or all");
  return d;
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
      throw Error(ErrorKind::Format, "bad --k '" + text + "', expected A or A..B");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto k = number(text);
    return {k, k};
  }
  const auto lo = number(std::string_view(text).substr(0, dots));
  const auto hi = number(std::string_view(text).substr(dots + 2));
  if (lo > hi) throw Error(ErrorKind::Format, "empty --k range '" + text + "'");
  return {lo, hi};
}

/// Series of every road on the selected dates, keyed road -> date.
using SeriesIndex = std::map<std::string, std::map<Date, DailySeries>>;

SeriesIndex index_series(std::span<const SpeedRecord> records, std::optional<Date> only) {
  SeriesIndex index;
  for (auto& s : assemble_all(records)) {
    if (only && s.date != *only) continue;
    auto road = s.road_id;
    auto date = s.date;
    index[road].emplace(date, std::move(s));
  }
  return index;
}

std::vector<Date> dates_of(const SeriesIndex& index) {
  std::set<Date> dates;
  for (const auto& [road, by_date] : index)
    for (const auto& [d, s] : by_date) dates.insert(d);
  return {dates.begin(), dates.end()};
}

/// One row per graph road: the series of one date, or the mean over dates.
FeatureTable series_table(const RoadGraph& graph, const SeriesIndex& index) {
  std::vector<std::vector<double>> rows;
  for (const auto& road : graph.roads()) {
    const auto it = index.find(road);
    if (it == index.end() || it->second.empty())
      throw Error(ErrorKind::Format, "road '" + road + "' has no speed series for the selected date(s)");
    std::vector<std::vector<double>> days;
    for (const auto& [d, s] : it->second) days.push_back(s.values);
    rows.push_back(mean_vector(days));
  }
  return FeatureTable::from_rows(rows);
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Options& o, std::ostream& out) {
  const auto records = load_records(o);
  const auto series = assemble_all(records);
  auto file = open_out(fs::path(o.out) / "series.csv");
  file << "road_id,date,observed";
  for (std::size_t t = 0; t < kSlotsPerDay; ++t) file << ",s" << t;
  file << '\n';
  std::size_t imputed = 0;
  for (const auto& s : series) {
    file << s.road_id << ',' << format_date(s.date) << ',' << s.observed_count();
    for (double v : s.values) file << ',' << fmt(v);
    file << '\n';
    imputed += s.values.size() - s.observed_count();
  }
  out << records.size() << " records, " << series.size() << " road-days, " << imputed
      << " imputed slots\n";
  return kOk;
}

int cmd_encode(const Options& o, std::ostream& out) {
  const auto records = load_records(o);
  const auto graph = load_graph(o, record_roads(records));
  const auto index = index_series(records, date_filter(o));
  for (const auto& [road, by_date] : index)
    if (!graph.index_of(road))
      throw Error(ErrorKind::UnknownEndpoint, "road '" + road + "' in records is not in the road universe");
  const auto dates = dates_of(index);
  const fs::path gaf_dir = fs::path(o.out) / "gaf";
  fs::create_directories(gaf_dir);
  auto excluded = open_out(fs::path(o.out) / "excluded.csv");
  excluded << "road_id,date,reason\n";
  std::size_t written = 0, skipped = 0;
  const std::optional<std::size_t> paa = o.paa ? std::optional(o.paa) : std::nullopt;
  for (const auto& road : graph.roads()) {
    const auto it = index.find(road);
    for (const auto& d : dates) {
      const DailySeries* s = nullptr;
      if (it != index.end()) {
        const auto found = it->second.find(d);
        if (found != it->second.end()) s = &found->second;
      }
      if (!s) {
        excluded << road << ',' << format_date(d) << ",no records\n";
        ++skipped;
        continue;
      }
      try {
        const auto gaf = series_to_gaf(s->values, paa);
        auto file = open_out(gaf_dir / (road + "_" + format_date(d) + ".gaf"));
        write_gaf(file, gaf);
        ++written;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ConstantSeries) throw;
        excluded << road << ',' << format_date(d) << ",constant series\n";
        ++skipped;
      }
    }
  }
  out << written << " GAF files, " << skipped << " excluded\n";
  return kOk;
}

struct GafEntry {
  std::string road;
  std::string date;
  GafMatrix gaf;
};

/// Every <road>_<date>.gaf in the directory, sorted by file name.
std::vector<GafEntry> load_gafs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "GAF directory '" + dir.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".gaf") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<GafEntry> entries;
  for (const auto& f : files) {
    const std::string stem = f.stem().string();
    const auto cut = stem.rfind('_');
    if (cut == std::string::npos) throw Error(ErrorKind::Format, "unexpected GAF file name " + f.string());
    std::ifstream in(f, std::ios::binary);
    try {
      entries.push_back({stem.substr(0, cut), stem.substr(cut + 1), read_gaf(in)});
    } catch (const Error& e) {
      throw Error(e.kind(), f.string() + ": " + e.what());
    }
  }
  if (entries.empty()) throw Error(ErrorKind::Io, "no GAF files in '" + dir.string() + "'");
  return entries;
}

fs::path gaf_dir_of(const Options& o) {
  return o.gaf_dir.empty() ? fs::path(o.out) / "gaf" : fs::path(o.gaf_dir);
}

fs::path model_path_of(const Options& o) {
  return o.model.empty() ? fs::path(o.out) / "model.npae" : fs::path(o.model);
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto entries = load_gafs(gaf_dir_of(o));
  std::vector<Tensor> dataset;
  for (const auto& e : entries) {
    if (e.gaf.size() != entries.front().gaf.size())
      throw Error(ErrorKind::ShapeMismatch, "GAF sizes differ within the training set");
    dataset.push_back(to_tensor(e.gaf));
  }
  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.learning_rate = o.lr;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const auto model = make_default_autoencoder(entries.front().gaf.size(), o.seed);
  const auto result = train(model, dataset, cfg);
  auto file = open_out(model_path_of(o));
  save_model(file, result.model);
  auto loss = open_out(fs::path(o.out) / "loss.csv");
  loss << "epoch,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i)
    loss << i + 1 << ',' << fmt(result.loss_trace[i]) << '\n';
  out << "trained on " << dataset.size() << " images, final loss "
      << fmt(result.loss_trace.empty() ? 0.0 : result.loss_trace.back()) << '\n';
  return kOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  auto min = open_in(model_path_of(o).string(), "model");
  const auto model = load_model(min);
  const auto only = date_filter(o);
  std::vector<GafEntry> entries;
  for (auto& e : load_gafs(gaf_dir_of(o)))
    if (!only || e.date == format_date(*only)) entries.push_back(std::move(e));
  if (entries.empty()) throw Error(ErrorKind::Io, "no GAF files for date " + o.date);
  std::vector<GafMatrix> gafs;
  for (const auto& e : entries) gafs.push_back(e.gaf);
  const auto table = extract_feature_table(model, gafs, resolve_threads(o.threads));

  // Mean over the selected dates per road, roads in first-seen order.
  std::vector<std::string> roads;
  std::map<std::string, std::vector<std::vector<double>>> per_road;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& rows = per_road[entries[i].road];
    if (rows.empty()) roads.push_back(entries[i].road);
    const auto r = table.row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  auto file = open_out(o.features.empty() ? fs::path(o.out) / "features.csv" : fs::path(o.features));
  file << "road_id";
  for (std::size_t d = 0; d < table.dim(); ++d) file << ",f" << d;
  file << '\n';
  for (const auto& road : roads) {
    file << road;
    for (double v : mean_vector(per_road[road])) file << ',' << fmt(v);
    file << '\n';
  }
  out << roads.size() << " roads, " << table.dim() << " features each\n";
  return kOk;
}

FeatureTable load_features(const fs::path& path, const RoadGraph& graph) {
  auto in = open_in(path.string(), "features");
  std::string line;
  std::getline(in, line);  // header
  std::map<std::string, std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string road, cell;
    std::getline(ss, road, ',');
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size())
        throw Error(ErrorKind::Format, path.string() + ": line " + std::to_string(line_no) + ": bad value");
      values.push_back(v);
    }
    rows[road] = std::move(values);
  }
  std::vector<std::vector<double>> ordered;
  for (const auto& road : graph.roads()) {
    const auto it = rows.find(road);
    if (it == rows.end())
      throw Error(ErrorKind::Format, "road '" + road + "' has no feature vector (excluded or missing GAF)");
    ordered.push_back(it->second);
  }
  return FeatureTable::from_rows(ordered);
}

int cmd_partition(const Options& o, std::ostream& out) {
  const auto [k_lo, k_hi] = parse_k_range(o.k);
  if (o.method != "ae-hier" && o.method != "spectral" && o.method != "raw-hier")
    throw Error(ErrorKind::Format, "unknown --method '" + o.method + "'");

  RoadGraph graph;
  FeatureTable table;
  if (o.method == "ae-hier") {
    graph = load_graph(o);
    table = load_features(o.features.empty() ? fs::path(o.out) / "features.csv" : fs::path(o.features), graph);
  } else {
    const auto records = load_records(o);
    graph = load_graph(o, record_roads(records));
    table = series_table(graph, index_series(records, date_filter(o)));
  }
  if (k_hi > graph.size())
    throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(k_hi) + " exceeds the " +
                                          std::to_string(graph.size()) + " roads");
  if (k_lo == 0) throw Error(ErrorKind::KTooLarge, "k must be >= 1");

  std::optional<Json> geometry;
  if (!o.geometry.empty()) geometry = read_json(o.geometry, "geometry");

  std::optional<HierarchicalResult> hierarchy;
  if (o.method != "spectral") hierarchy = hierarchical_partition(graph, table, k_lo);

  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    ClusterSet clusters =
        hierarchy ? partition_from_trace(graph.size(), hierarchy->trace, graph.size() - k)
                  : spectral_partition(graph, table, k, SpectralConfig{o.seed});
    if (hierarchy)
      for (const auto& m : clusters.members())
        if (connected_components(graph, m).size() != 1)
          throw Error(ErrorKind::Format, "internal error: disconnected cluster at k = " + std::to_string(k));
    const std::string stem = "partition_" + o.method + "_k" + std::to_string(k);
    write_json(fs::path(o.out) / (stem + ".json"), partition_to_json(graph, clusters, o.method));
    if (geometry)
      write_json(fs::path(o.out) / (stem + ".geojson"), annotate_geojson(*geometry, graph, clusters));
  }
  out << (k_hi - k_lo + 1) << " partition(s) written\n";
  return kOk;
}

std::vector<fs::path> files_matching(const fs::path& dir, const std::string& prefix,
                                     const std::string& ext) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with(prefix) && e.path().extension() == ext)
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string csv_optional(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

/// comparison.csv over every metrics file in `dir`: ae-hier against each
/// other method at the same k.
std::size_t write_comparison(const fs::path& dir) {
  std::map<std::pair<std::string, std::size_t>, MetricsReport> reports;
  for (const auto& f : files_matching(dir, "metrics_", ".json")) {
    const auto r = report_from_json(read_json(f.string(), "metrics"));
    reports[{r.method, r.k}] = r;
  }
  auto file = open_out(dir / "comparison.csv");
  file << "k,method_a,method_b,intra_a,intra_b,intra_improvement_pct,inter_a,inter_b,"
          "inter_improvement_pct\n";
  std::size_t rows = 0;
  for (const auto& [key, a] : reports) {
    if (key.first != "ae-hier") continue;
    for (const auto& [other, b] : reports) {
      if (other.first == "ae-hier" || other.second != a.k) continue;
      const auto c = compare(a, b);
      file << a.k << ',' << a.method << ',' << b.method << ',' << fmt(a.intra) << ',' << fmt(b.intra)
           << ',' << fmt(c.intra_improvement_pct) << ',' << csv_optional(a.inter) << ','
           << csv_optional(b.inter) << ',' << csv_optional(c.inter_improvement_pct) << '\n';
      ++rows;
    }
  }
  return rows;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto records = load_records(o);
  const auto graph = load_graph(o, record_roads(records));
  const auto index = index_series(records, date_filter(o));
  const auto dates = dates_of(index);
  if (dates.empty()) throw Error(ErrorKind::MissingSeries, "no series for --date " + o.date);

  std::vector<FeatureTable> per_date;
  for (const auto& d : dates) {
    std::vector<std::vector<double>> rows;
    for (const auto& road : graph.roads()) {
      const DailySeries* s = nullptr;
      if (const auto it = index.find(road); it != index.end())
        if (const auto found = it->second.find(d); found != it->second.end()) s = &found->second;
      if (!s)
        throw Error(ErrorKind::MissingSeries, "road '" + road + "' has no series on " + format_date(d));
      rows.push_back(s->values);
    }
    per_date.push_back(FeatureTable::from_rows(rows));
  }

  const auto partitions = files_matching(o.out, "partition_", ".json");
  if (partitions.empty()) throw Error(ErrorKind::Io, "no partition_*.json files in '" + o.out + "'");
  for (const auto& f : partitions) {
    const Json pj = read_json(f.string(), "partition");
    const auto clusters = partition_from_json(pj, graph);
    const std::string method = pj.at("method").get<std::string>();
    std::vector<MetricsReport> reports;
    for (const auto& table : per_date) reports.push_back(evaluate_partition(clusters, table, graph, method));
    Json j = report_to_json(mean_report(reports));
    Json days = Json::array();
    for (std::size_t i = 0; i < dates.size(); ++i) {
      Json day = report_to_json(reports[i]);
      day["date"] = format_date(dates[i]);
      days.push_back(std::move(day));
    }
    j["per_date"] = std::move(days);
    write_json(fs::path(o.out) / ("metrics_" + method + "_k" + std::to_string(clusters.k) + ".json"), j);
  }
  const auto rows = write_comparison(o.out);
  out << partitions.size() << " report(s), " << rows << " comparison row(s)\n";
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const auto rows = write_comparison(o.out);
  out << rows << " comparison row(s)\n";
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  SynthScenario scenario;
  if (!o.scenario.empty()) scenario = scenario_from_json(read_json(o.scenario, "scenario"));
  const auto data = generate(scenario);
  const fs::path dir(o.out);
  {
    auto f = open_out(dir / "records.csv");
    write_records(f, to_records(data));
  }
  {
    std::vector<RoadEdge> edges;
    for (auto [a, b] : data.graph.edges()) edges.emplace_back(data.graph.road(a), data.graph.road(b));
    auto f = open_out(dir / "edges.csv");
    write_edge_list(f, edges);
  }
  {
    auto f = open_out(dir / "roads.txt");
    for (const auto& r : data.graph.roads()) f << r << '\n';
  }
  write_json(dir / "truth.json", partition_to_json(data.graph, data.truth, "truth"));
  write_json(dir / "scenario.json", scenario_to_json(scenario));
  if (data.tidal)
    write_json(dir / "tidal.json", Json{{"road_a", data.graph.road(data.tidal->road_a)},
                                        {"road_b", data.graph.road(data.tidal->road_b)}});
  out << data.road_count() << " roads, " << data.truth.k << " regions, " << scenario.days << " day(s)\n";
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteLoss:
      return kDiverged;
    case ErrorKind::KTooSmall:
    case ErrorKind::KTooLarge:
      return kInfeasibleK;
    case ErrorKind::MissingSeries:
    case ErrorKind::UniverseMismatch:
    case ErrorKind::KMismatch:
      return kEvaluationMismatch;
    default:
      return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Road network partitioning from floating-car speed data"};
  app.require_subcommand(1);

  auto add_records = [&](CLI::App* c) {
    c->add_option("--records", o.records, "Speed records CSV")->required();
    c->add_option("--period-base", o.period_base, "First period number in the file (0 or 1)")
        ->check(CLI::IsMember({0, 1}));
  };
  auto add_graph = [&](CLI::App* c) {
    c->add_option("--edges", o.edges, "Edge list CSV (road_a,road_b)")->required();
    c->add_option("--roads", o.roads, "Road universe, one id per line");
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };
  auto add_date = [&](CLI::App* c) { c->add_option("--date", o.date, "YYYYMMDD or all"); };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  };

  auto* ingest = app.add_subcommand("ingest", "Assemble and impute daily series");
  add_records(ingest);
  add_out(ingest);

  auto* encode = app.add_subcommand("encode", "Write one GAF per road and date");
  add_records(encode);
  add_graph(encode);
  add_out(encode);
  add_date(encode);
  encode->add_option("--paa", o.paa, "Downsample each series to N points first");

  auto* trainc = app.add_subcommand("train", "Train the autoencoder on a GAF directory");
  add_out(trainc);
  add_threads(trainc);
  trainc->add_option("--gaf", o.gaf_dir, "GAF directory (default OUT/gaf)");
  trainc->add_option("--model", o.model, "Checkpoint path (default OUT/model.npae)");
  trainc->add_option("--epochs", o.epochs);
  trainc->add_option("--batch", o.batch)->check(CLI::PositiveNumber);
  trainc->add_option("--lr", o.lr);
  trainc->add_option("--seed", o.seed);

  auto* feats = app.add_subcommand("features", "Encoder features per road");
  add_out(feats);
  add_date(feats);
  add_threads(feats);
  feats->add_option("--gaf", o.gaf_dir, "GAF directory (default OUT/gaf)");
  feats->add_option("--model", o.model, "Checkpoint path (default OUT/model.npae)");
  feats->add_option("--features", o.features, "Output path (default OUT/features.csv)");

  auto* part = app.add_subcommand("partition", "Partition the network for one k or a range");
  part->add_option("--records", o.records, "Speed records CSV (spectral, raw-hier)");
  part->add_option("--period-base", o.period_base)->check(CLI::IsMember({0, 1}));
  add_graph(part);
  add_out(part);
  add_date(part);
  part->add_option("--method", o.method)->check(CLI::IsMember({"ae-hier", "spectral", "raw-hier"}));
  part->add_option("--k", o.k, "A or A..B");
  part->add_option("--geometry", o.geometry, "GeoJSON with properties.road_id");
  part->add_option("--features", o.features, "Features CSV (default OUT/features.csv)");
  part->add_option("--seed", o.seed, "k-means seed (spectral)");

  auto* eval = app.add_subcommand("evaluate", "Metrics for every partition file in OUT");
  add_records(eval);
  add_graph(eval);
  add_out(eval);
  add_date(eval);

  auto* comp = app.add_subcommand("compare", "Comparison table from metrics files in OUT");
  add_out(comp);

  auto* syn = app.add_subcommand("synth", "Generate a planted synthetic network");
  add_out(syn);
  syn->add_option("--scenario", o.scenario, "Scenario JSON");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*encode) return cmd_encode(o, out);
    if (*trainc) return cmd_train(o, out);
    if (*feats) return cmd_features(o, out);
    if (*part) {
      if (o.method != "ae-hier" && o.records.empty())
        throw Error(ErrorKind::Io, "--records is required for --method " + o.method);
      return cmd_partition(o, out);
    }
    if (*eval) return cmd_evaluate(o, out);
    if (*comp) return cmd_compare(o, out);
    if (*syn) return cmd_synth(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace netpart::cli
