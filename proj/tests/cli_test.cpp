#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "netpart/artifacts.hpp"
#include "netpart/graph.hpp"
#include "netpart/ingest.hpp"
#include "netpart/synth.hpp"

namespace netpart {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result netpart_run(std::vector<std::string> args) {
  args.insert(args.begin(), "netpart");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("netpart_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::size_t count_files(const std::string& sub, const std::string& ext) const {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_ / sub))
      if (e.path().extension() == ext) ++n;
    return n;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::size_t line_count(const std::string& p) {
    const auto text = slurp(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  }

  /// Five roads on a path, two days; road "r2" is constant when asked.
  void write_five_roads(bool constant_road) {
    std::vector<SpeedRecord> records;
    const Date days[] = {*parse_date("20190909"), *parse_date("20190910")};
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t t = 0; t < kSlotsPerDay; ++t) {
          double v = 40.0 + 10.0 * std::sin(0.02 * static_cast<double>(t * (r + 1)) + d);
          if (constant_road && r == 2) v = 30.0;
          records.push_back({days[d], t, "r" + std::to_string(r), v, 10});
        }
    std::ofstream rec(path("records.csv"));
    write_records(rec, records);
    std::ofstream edges(path("edges.csv"));
    edges << "road_a,road_b\nr0,r1\nr1,r2\nr2,r3\nr3,r4\n";
  }

  /// Synthetic scenario written through the CLI.
  void synth(std::size_t rows, std::size_t cols, std::size_t regions, double sigma) {
    std::ofstream sc(path("scenario.in.json"));
    sc << "{\"rows\":" << rows << ",\"cols\":" << cols << ",\"region_count\":" << regions
       << ",\"noise_sigma\":" << sigma << ",\"seed\":3}";
    sc.close();
    ASSERT_EQ(netpart_run({"synth", "--scenario", path("scenario.in.json"), "--out", dir_.string()}).code, 0);
  }

  std::vector<std::string> graph_flags() const {
    return {"--records", path("records.csv"), "--edges", path("edges.csv"), "--roads", path("roads.txt")};
  }

  fs::path dir_;
};

TEST_F(Cli, NoCommandIsInputError) {
  EXPECT_EQ(netpart_run({}).code, cli::kInputError);
  EXPECT_EQ(netpart_run({"bogus"}).code, cli::kInputError);
  EXPECT_EQ(netpart_run({"--help"}).code, cli::kOk);
}

TEST_F(Cli, IngestWritesSeriesTable) {
  write_five_roads(false);
  const auto r = netpart_run({"ingest", "--records", path("records.csv"), "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(path("series.csv")), 11u);
}

TEST_F(Cli, EncodeWritesOneGafPerRoadDay) {
  write_five_roads(false);
  const auto r = netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"),
                              "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files("gaf", ".gaf"), 10u);
  EXPECT_EQ(slurp(path("excluded.csv")), "road_id,date,reason\n");
  EXPECT_TRUE(fs::exists(dir_ / "gaf" / "r0_20190909.gaf"));
}

TEST_F(Cli, EncodeExcludesConstantRoad) {
  write_five_roads(true);
  const auto r = netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"),
                              "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files("gaf", ".gaf"), 8u);
  EXPECT_EQ(slurp(path("excluded.csv")),
            "road_id,date,reason\nr2,20190909,constant series\nr2,20190910,constant series\n");
}

TEST_F(Cli, EncodeMissingEdgesNamesPath) {
  write_five_roads(false);
  const auto missing = path("nope.csv");
  const auto r = netpart_run({"encode", "--records", path("records.csv"), "--edges", missing,
                              "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST_F(Cli, EncodeMalformedRecordsReportsLine) {
  std::ofstream(path("records.csv")) << "date,period,road_id,speed,sample_vehicles\n20190909,0,r0,abc,1\n";
  std::ofstream(path("edges.csv")) << "road_a,road_b\n";
  const auto r = netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"),
                              "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(Cli, TrainOneEpochDeterministic) {
  write_five_roads(false);
  ASSERT_EQ(netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"),
                         "--paa", "36", "--out", dir_.string()}).code, 0);
  const std::vector<std::string> train{"train", "--out", dir_.string(), "--epochs", "1", "--seed", "5"};
  auto r = netpart_run(train);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "model.npae"));
  EXPECT_EQ(line_count(path("loss.csv")), 2u);  // header + 1 epoch
  const auto first = slurp(path("loss.csv"));
  const auto model = slurp(path("model.npae"));
  ASSERT_EQ(netpart_run(train).code, 0);
  EXPECT_EQ(slurp(path("loss.csv")), first);
  EXPECT_EQ(slurp(path("model.npae")), model);
}

TEST_F(Cli, TrainDivergenceExitsThree) {
  write_five_roads(false);
  ASSERT_EQ(netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"),
                         "--paa", "36", "--out", dir_.string()}).code, 0);
  const auto r = netpart_run({"train", "--out", dir_.string(), "--epochs", "5", "--lr", "1e100"});
  EXPECT_EQ(r.code, cli::kDiverged);
  EXPECT_NE(r.err.find("epoch"), std::string::npos);
}

TEST_F(Cli, TrainWithoutGafsIsInputError) {
  EXPECT_EQ(netpart_run({"train", "--out", dir_.string()}).code, cli::kInputError);
}

TEST_F(Cli, KRangeWritesOnePartitionPerK) {
  synth(6, 6, 4, 2.0);
  auto args = graph_flags();
  args.insert(args.begin(), "partition");
  for (const auto& a : {"--method", "raw-hier", "--k", "2..10", "--out"}) args.push_back(a);
  args.push_back(dir_.string());
  const auto r = netpart_run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.path().filename().string().starts_with("partition_raw-hier_k")) ++n;
  EXPECT_EQ(n, 9u);
}

TEST_F(Cli, InfeasibleKExitsFour) {
  synth(4, 4, 2, 2.0);
  for (const char* k : {"0", "17", "3..20"}) {
    auto args = graph_flags();
    args.insert(args.begin(), "partition");
    for (const auto& a : {"--method", "raw-hier", "--out"}) args.push_back(a);
    args.push_back(dir_.string());
    args.push_back("--k");
    args.push_back(k);
    EXPECT_EQ(netpart_run(args).code, cli::kInfeasibleK) << k;
  }
  // Two disconnected roads cannot form one connected cluster.
  std::ofstream(path("edges2.csv")) << "road_a,road_b\n0,1\n";
  std::ofstream(path("roads2.txt")) << "0\n1\n2\n";
  std::vector<SpeedRecord> recs;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t t = 0; t < kSlotsPerDay; ++t)
      recs.push_back({*parse_date("20190909"), t, std::to_string(r), 20.0 + r + 0.01 * t, 1});
  {
    std::ofstream f(path("records2.csv"));
    write_records(f, recs);
  }
  EXPECT_EQ(netpart_run({"partition", "--records", path("records2.csv"), "--edges", path("edges2.csv"),
                         "--roads", path("roads2.txt"), "--method", "raw-hier", "--k", "1", "--out",
                         dir_.string()})
                .code,
            cli::kInfeasibleK);
}

TEST_F(Cli, SpectralRecoversPlantedBlocks) {
  synth(4, 6, 2, 0.0);
  auto args = graph_flags();
  args.insert(args.begin(), "partition");
  for (const auto& a : {"--method", "spectral", "--k", "2", "--out"}) args.push_back(a);
  args.push_back(dir_.string());
  ASSERT_EQ(netpart_run(args).code, 0);
  std::ifstream rin(path("roads.txt"));
  std::ifstream ein(path("edges.csv"));
  const auto edges = read_edge_list(ein);
  const auto graph = RoadGraph::build(read_road_list(rin), edges);
  const auto truth = partition_from_json(Json::parse(slurp(path("truth.json"))), graph);
  const auto found = partition_from_json(Json::parse(slurp(path("partition_spectral_k2.json"))), graph);
  EXPECT_EQ(adjusted_rand_index(found, truth), 1.0);
}

TEST_F(Cli, EvaluateTwoMethodsCountsReports) {
  synth(6, 6, 4, 2.0);
  for (const char* method : {"raw-hier", "spectral"}) {
    auto args = graph_flags();
    args.insert(args.begin(), "partition");
    for (const auto& a : {"--k", "2..10", "--out"}) args.push_back(a);
    args.push_back(dir_.string());
    args.push_back("--method");
    args.push_back(method);
    ASSERT_EQ(netpart_run(args).code, 0);
  }
  // raw-hier files stand in for ae-hier to exercise the comparison table.
  for (std::size_t k = 2; k <= 10; ++k) {
    const auto src = dir_ / ("partition_raw-hier_k" + std::to_string(k) + ".json");
    auto j = Json::parse(slurp(src.string()));
    j["method"] = "ae-hier";
    std::ofstream(dir_ / ("partition_ae-hier_k" + std::to_string(k) + ".json")) << j.dump();
    fs::remove(src);
  }
  auto args = graph_flags();
  args.insert(args.begin(), "evaluate");
  args.push_back("--out");
  args.push_back(dir_.string());
  const auto r = netpart_run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.path().filename().string().starts_with("metrics_")) ++reports;
  EXPECT_EQ(reports, 18u);
  EXPECT_EQ(line_count(path("comparison.csv")), 10u);
  const auto m = Json::parse(slurp(path("metrics_spectral_k3.json")));
  EXPECT_EQ(m.at("k"), 3);
  EXPECT_EQ(m.at("per_cluster_intra").size(), 3u);
  EXPECT_EQ(m.at("per_date").size(), 1u);

  // compare alone rebuilds the same table.
  const auto before = slurp(path("comparison.csv"));
  ASSERT_EQ(netpart_run({"compare", "--out", dir_.string()}).code, 0);
  EXPECT_EQ(slurp(path("comparison.csv")), before);
}

TEST_F(Cli, EvaluateSingletonsGivesZeroIntra) {
  synth(3, 3, 1, 2.0);
  Json assignment = Json::object();
  for (std::size_t r = 0; r < 9; ++r) assignment[std::to_string(r)] = r;
  std::ofstream(path("partition_spectral_k9.json"))
      << Json{{"k", 9}, {"method", "spectral"}, {"assignment", assignment}}.dump();
  auto args = graph_flags();
  args.insert(args.begin(), "evaluate");
  args.push_back("--out");
  args.push_back(dir_.string());
  ASSERT_EQ(netpart_run(args).code, 0);
  const auto m = Json::parse(slurp(path("metrics_spectral_k9.json")));
  EXPECT_EQ(m.at("intra"), 0.0);
  for (const auto& v : m.at("per_cluster_intra")) EXPECT_EQ(v, 0.0);
}

TEST_F(Cli, EvaluateUniverseMismatchExitsFive) {
  synth(3, 3, 1, 2.0);
  std::ofstream(path("partition_spectral_k1.json"))
      << R"({"k":1,"method":"spectral","assignment":{"0":0,"1":0}})";
  auto args = graph_flags();
  args.insert(args.begin(), "evaluate");
  args.push_back("--out");
  args.push_back(dir_.string());
  EXPECT_EQ(netpart_run(args).code, cli::kEvaluationMismatch);
}

TEST_F(Cli, FullAePipelineGivesConnectedClusters) {
  synth(6, 6, 4, 2.0);
  ASSERT_EQ(netpart_run({"encode", "--records", path("records.csv"), "--edges", path("edges.csv"), "--roads",
                         path("roads.txt"), "--paa", "72", "--out", dir_.string()})
                .code,
            0);
  ASSERT_EQ(netpart_run({"train", "--out", dir_.string(), "--epochs", "2"}).code, 0);
  ASSERT_EQ(netpart_run({"features", "--out", dir_.string()}).code, 0);
  EXPECT_EQ(line_count(path("features.csv")), 37u);
  std::ofstream(path("geo.json"))
      << R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"road_id":"0"},"geometry":null}]})";
  const std::vector<std::string> part{"partition", "--edges", path("edges.csv"), "--roads", path("roads.txt"),
                                      "--method", "ae-hier", "--k", "4", "--geometry", path("geo.json"),
                                      "--out", dir_.string()};
  const auto r = netpart_run(part);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto first = slurp(path("partition_ae-hier_k4.json"));
  std::ifstream rin(path("roads.txt"));
  std::ifstream ein(path("edges.csv"));
  const auto edges = read_edge_list(ein);
  const auto graph = RoadGraph::build(read_road_list(rin), edges);
  const auto found = partition_from_json(Json::parse(first), graph);
  EXPECT_EQ(found.k, 4u);
  for (const auto& m : found.members()) EXPECT_EQ(connected_components(graph, m).size(), 1u);
  const auto geo = Json::parse(slurp(path("partition_ae-hier_k4.geojson")));
  EXPECT_TRUE(geo["features"][0]["properties"].contains("cluster"));
  // Re-running gives byte-identical output.
  ASSERT_EQ(netpart_run(part).code, 0);
  EXPECT_EQ(slurp(path("partition_ae-hier_k4.json")), first);
}

TEST_F(Cli, SynthWritesStandardFiles) {
  synth(3, 4, 2, 1.0);
  for (const char* f : {"records.csv", "edges.csv", "roads.txt", "truth.json", "scenario.json"})
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  EXPECT_EQ(line_count(path("roads.txt")), 12u);
  EXPECT_EQ(line_count(path("records.csv")), 1u + 12u * kSlotsPerDay);
}

}  // namespace
}  // namespace netpart
