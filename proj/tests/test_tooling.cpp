#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "horolab/csv.hpp"
#include "horolab/experiments.hpp"
#include "horolab/fit.hpp"
#include "horolab/parallel.hpp"
#include "horolab/rng.hpp"
#include "horolab/sha1.hpp"
#include "horolab/svg.hpp"

using namespace horolab;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("counter rng") {
    CounterRng a(1234, 7), b(1234, 7), c(1234, 8);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    CounterRng a2(1234, 7);
    for (int i = 0; i < 1000; ++i) differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);

    CounterRng r(99, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));

    // random access through the counter
    CounterRng s(5, 1);
    (void)s.next_u64();
    (void)s.next_u64();
    const std::uint64_t third = s.next_u64();
    s.seek(2);
    CHECK(s.next_u64() == third);
}

TEST_CASE("kahan merge") {
    KahanSum k;
    for (int i = 0; i < 10000; ++i) {
        k.add(1e16);
        k.add(1.0);
        k.add(-1e16);
    }
    CHECK(k.value() == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("parallel batches cover the range exactly once") {
    const std::int64_t total = 100001;
    std::vector<int> hits(total, 0);
    parallel_batches(total, 1000, 4, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) ++hits[i];
    });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("csv round trip") {
    CsvTable t;
    t.header = {"t", "eps", "estimate", "stderr", "n_samples"};
    t.rows.push_back({"1", "", "3.25", "0.01", "100"});
    t.rows.push_back({"2", "0.5", "quoted,cell", "with \"quote\"", "line\nbreak"});
    const std::string text = write_csv(t);
    CHECK(text.find("\r\n") != std::string::npos);
    const CsvTable back = read_csv(text);
    CHECK(back.header == t.header);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);

    CHECK(back.numeric_column("t") == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(back.numeric_column("missing"), std::invalid_argument);
    CHECK_THROWS_AS(read_csv(""), std::invalid_argument);
}

TEST_CASE("sha1 known vectors") {
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
          "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
    // git hash-object of "hello\n"
    CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("svg plots") {
    PlotSeries s;
    s.x = {1.0};
    s.y = {2.0};
    PlotStyle style;
    style.title = "single point";
    const std::string svg = emit_plot({s}, style);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(emit_plot({s}, style) == svg); // byte-identical

    PlotSeries decay;
    decay.x = {1, 2, 3, 4};
    decay.y = {100.0, 10.0, 1.0, 0.1};
    decay.yerr = {1.0, 0.5, 0.05, 0.01};
    PlotStyle logstyle;
    logstyle.logy = true;
    logstyle.fit = FitLine{-1.0, 3.0};
    const std::string svg2 = emit_plot({decay}, logstyle);
    CHECK(svg2.find("dasharray") != std::string::npos); // the fit line

    PlotSeries empty;
    CHECK_THROWS_AS(emit_plot({empty}, style), EmptySeries);

    // nonpositive values are dropped on log axes rather than corrupting it
    PlotSeries mixed;
    mixed.x = {1, 2};
    mixed.y = {0.0, 5.0};
    CHECK_NOTHROW(emit_plot({mixed}, logstyle));
}

TEST_CASE("fitting") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(i);
        y.push_back(3.0 - 2.0 * i);
    }
    const LinearFit lf = fit_line(x, y);
    CHECK(lf.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(lf.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lf.r2 == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> yq;
    for (int i = 0; i < 20; ++i) yq.push_back(1.0 + 0.5 * i - 0.25 * i * i);
    const PolyFit pf = fit_poly(x, yq, 2);
    CHECK(pf.coeffs[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pf.coeffs[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pf.coeffs[2] == doctest::Approx(-0.25).epsilon(1e-9));

    CHECK_THROWS_AS(fit_poly({1.0, 2.0}, {1.0, 2.0}, 2), InsufficientData);
}

TEST_CASE("config parsing is strict") {
    const std::string good = R"({
        "kind": "cones",
        "seed": 7,
        "output_dir": "x",
        "params": {"n": 3, "entries": [1.0, 0.0, -1.0]}
    })";
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(good);
    CHECK(cfg.kind == "cones");
    CHECK(cfg.seed == 7);

    // canonical round trip
    const ExperimentConfig back = ExperimentConfig::from_json_text(cfg.canonical_json());
    CHECK(back.canonical_json() == cfg.canonical_json());

    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{"), InvalidConfig);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"kind":"cones"})"), InvalidConfig);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json_text(
            R"({"kind":"cones","seed":1,"output_dir":"x","params":{},"extra":1})"),
        InvalidConfig);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json_text(
            R"({"kind":"wat","seed":1,"output_dir":"x","params":{}})"),
        InvalidConfig);
}

TEST_CASE("runner rejects malformed scientific parameters") {
    ExperimentConfig cfg;
    cfg.kind = "equidist";
    cfg.seed = 1;
    cfg.output_dir = (std::filesystem::temp_directory_path() / "horolab_bad").string();
    cfg.params = Json{{"n", 2},
                      {"theta", {1.0, -1.0}},
                      {"times", {0.0, 1.0}},
                      {"samples", -5},
                      {"bump_radius", 1.2},
                      {"bump_order", 1}};
    CHECK_THROWS_AS(run(cfg), InvalidConfig);

    cfg.params["samples"] = 10;
    cfg.params["surprise"] = true;
    CHECK_THROWS_AS(run(cfg), InvalidConfig);
}

TEST_CASE("cones experiment manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "horolab_cones";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg;
    cfg.kind = "cones";
    cfg.seed = 0;
    cfg.output_dir = dir.string();
    cfg.params = Json{{"n", 5}, {"entries", {6.0, 7.0, -12.0, 9.0, 10.0}}};
    const RunManifest manifest = run(cfg);
    CHECK(manifest.summary.at("in_C").get<bool>());
    CHECK_FALSE(manifest.summary.at("in_Ctilde").get<bool>());
    CHECK_FALSE(manifest.summary.at("in_A").get<bool>());
    CHECK(manifest.summary.at("depth").get<double>() == 1.0);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    // manifest is valid JSON that echoes the config
    const Json parsed = Json::parse(slurp(dir / "manifest.json"));
    CHECK(parsed.at("config").at("kind") == "cones");
    CHECK(parsed.at("config_hash").get<std::string>().size() == 40);
}

TEST_CASE("experiment runs are byte-deterministic") {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "horolab_det";
    fs::remove_all(base);

    auto make_cfg = [&](const std::string& sub) {
        ExperimentConfig cfg;
        cfg.kind = "nondiv";
        cfg.seed = 31337;
        cfg.output_dir = (base / sub).string();
        cfg.params = Json{{"n", 2},
                          {"theta", {1.0, -1.0}},
                          {"times", {1.0, 3.0}},
                          {"eps", {0.5, 0.25}},
                          {"samples", 4000}};
        return cfg;
    };

    run(make_cfg("a"));
    // different thread budget, same bytes
    setenv("HOROLAB_THREADS", "1", 1);
    run(make_cfg("b"));
    unsetenv("HOROLAB_THREADS");

    const std::string csv_a = slurp(base / "a" / "nondiv.csv");
    const std::string csv_b = slurp(base / "b" / "nondiv.csv");
    CHECK(csv_a == csv_b);
    CHECK(slurp(base / "a" / "nondiv.svg") == slurp(base / "b" / "nondiv.svg"));

    // the emitted CSV is re-parseable and numerically sane
    const CsvTable table = read_csv(csv_a);
    CHECK(table.header == std::vector<std::string>{"t", "eps", "estimate", "stderr",
                                                   "n_samples"});
    for (double f : table.numeric_column("estimate")) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }

    // manifest hashes match the emitted files
    const Json manifest = Json::parse(slurp(base / "a" / "manifest.json"));
    CHECK(manifest.at("outputs").at("nondiv.csv").get<std::string>() == git_blob_hash(csv_a));
}

TEST_CASE("equidist experiment round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "horolab_eq";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.kind = "equidist";
    cfg.seed = 11;
    cfg.output_dir = dir.string();
    cfg.params = Json{{"n", 2},       {"theta", {1.0, -1.0}}, {"times", {0.0, 2.0, 4.0}},
                      {"samples", 3000}, {"bump_radius", 1.2},   {"bump_order", 1}};
    const RunManifest manifest = run(cfg);
    CHECK(fs::exists(dir / "equidist.csv"));
    CHECK(fs::exists(dir / "equidist.svg"));
    CHECK(manifest.summary.contains("reference_mean"));
    const CsvTable table = read_csv(slurp(dir / "equidist.csv"));
    CHECK(table.rows.size() == 3);
    // eps column stays empty for this experiment
    for (const auto& row : table.rows) CHECK(row[1].empty());
}
