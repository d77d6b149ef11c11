#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "drillport/csv.hpp"
#include "drillport/error.hpp"
#include "drillport/io.hpp"
#include "json.hpp"

using namespace drillport;
namespace fs = std::filesystem;

namespace {

const fs::path kData{DRILLPORT_TEST_DATA_DIR};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "drillport_test_io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(Csv, QuotesCommentsAndTrimming) {
    const auto t = parse_csv("# header comment\na, b ,c\n\n1,\"x, y\", 3 \n# mid\n4,5,6\n", "mem");
    ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.rows.size(), 2U);
    EXPECT_EQ(t.field(0, "b"), "x, y");
    EXPECT_DOUBLE_EQ(t.number(0, "c"), 3.0);
    EXPECT_EQ(t.integer(1, "a"), 4);
    EXPECT_EQ(t.lines[1], 6U);
    EXPECT_EQ(t.where(1), "mem:6");
}

TEST(Csv, Errors) {
    EXPECT_THROW(parse_csv("a,b\n1,2,3\n", "mem"), InputError);
    const auto t = parse_csv("a,b\nx,2\n", "mem");
    EXPECT_THROW((void)t.number(0, "a"), InputError);
    EXPECT_THROW((void)t.column("zz"), InputError);
    EXPECT_THROW(read_csv("/nonexistent/file.csv"), InputError);
}

TEST(Csv, FormatDoubleRoundTrips) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(4075.95), "4075.95");
}

TEST(Loaders, BundledTraps) {
    const auto traps = load_traps(kData / "traps.csv");
    ASSERT_FALSE(traps.empty());
    const auto it = std::find_if(traps.begin(), traps.end(), [](const Project& p) { return p.id == "QL3"; });
    ASSERT_NE(it, traps.end());
    EXPECT_DOUBLE_EQ(it->pos, 0.53);
    EXPECT_DOUBLE_EQ(it->npv, 13515.0);
    EXPECT_EQ(it->region, "E");
}

TEST(Loaders, QuarantinedRowsAreRejectedWithDiagnostics) {
    try {
        (void)load_traps(kData / "traps_quarantined.csv");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("KL3"), std::string::npos);
        EXPECT_NE(msg.find("outside [0, 1]"), std::string::npos);
        EXPECT_NE(msg.find("traps_quarantined.csv:4"), std::string::npos);
    }
}

TEST(Loaders, MandatoryCountAboveOneMeansMandatory) {
    const auto apps = load_appraisals(kData / "appraisals.csv");
    const auto it = std::find_if(apps.begin(), apps.end(), [](const Project& p) { return p.id == "S9"; });
    ASSERT_NE(it, apps.end());
    EXPECT_TRUE(it->mandatory);
    EXPECT_EQ(it->kind, ProjectKind::Appraisal);
}

TEST(Loaders, DuplicateIdsAcrossFiles) {
    const auto path = scratch("dup_apps.csv");
    std::ofstream(path) << "region,id,cor,cgr,pro_or,pro_gr,cost,npv,epos,wells,mandatory\n"
                           "E,QL3,0,0,0,0,0,100,0.5,1,0\n";
    EXPECT_THROW(load_prospects(kData / "traps.csv", path), InputError);
}

TEST(Loaders, SimulationInputs) {
    EXPECT_FALSE(load_elicitations(kData / "elicitation.csv").empty());
    EXPECT_EQ(load_history(kData / "history.csv").rows(), 40);
    EXPECT_FALSE(load_economics(kData / "economics.csv").empty());
}

TEST(Config, SampleLoads) {
    const auto cfg = load_config(kData / "sample_config.json");
    EXPECT_EQ(cfg.targets.tot_wells, 19);
    EXPECT_EQ(cfg.solver.pop_size, 100U);
    ASSERT_TRUE(cfg.data.traps.has_value());
    EXPECT_TRUE(fs::exists(*cfg.data.traps));
    EXPECT_FALSE(load_config_prospects(cfg).empty());
}

TEST(Config, UnknownKeyAndBadValues) {
    EXPECT_THROW(parse_config(R"({"solver": {"pop": 10}})", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config(R"({"solverr": {}})", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config(R"({"solver": {"pop_size": 7}})", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config(R"({"targets": {"drill_lb": 0.5}})", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config(R"({"data": {"traps": "missing.csv"}})", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config("{not json", ".", "t"), ConfigError);
    EXPECT_THROW(parse_config(R"({"metrics": {"reference": [1]}})", ".", "t"), ConfigError);
}

TEST(Config, CanonicalJsonRoundTrips) {
    const auto cfg = load_config(kData / "sample_config.json");
    const auto text = config_to_json(cfg);
    const auto again = parse_config(text, "/", "canonical");
    EXPECT_EQ(config_to_json(again), text);
}

TEST(Front, WriteReadRoundTrip) {
    std::vector<Individual> front(2);
    front[0].bits = {1, 0, 1};
    front[0].eval.emv = 1234.5678;
    front[0].eval.risk = 0.1 + 0.2;
    front[1].bits = {0, 1, 1};
    front[1].eval.emv = -3.0;
    front[1].eval.risk = 7.0;
    front[1].eval.violation = 2.5;
    const auto path = scratch("front.csv");
    {
        std::ofstream out(path);
        write_front_csv(out, front);
    }
    const auto rows = read_front_csv(path);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[0].emv, 1234.5678);
    EXPECT_EQ(rows[0].risk, 0.1 + 0.2);
    EXPECT_EQ(rows[0].bits, front[0].bits);
    EXPECT_EQ(rows[1].total_violation, 2.5);
    EXPECT_EQ(rows[1].point().f1, 3.0);
}

TEST(Manifest, EmbedsConfigAndLoadsBack) {
    const auto cfg = load_config(kData / "sample_config.json");
    std::ostringstream out;
    write_manifest(out, cfg, {"optimize", "oe", 42, 1.5, {"front.csv"}});
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42U);
    EXPECT_EQ(j.at("command"), "optimize");
    const auto again = parse_config(out.str(), "/", "manifest");
    EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}
