#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqroute/commands.hpp"
#include "cqroute/errors.hpp"
#include "cqroute/figures.hpp"

using namespace cqroute;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("cqroute_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

struct Run {
    ExitCode code;
    std::string out;
    std::string log;
};

Run run(const RunSpec& spec) {
    std::ostringstream out, log;
    const ExitCode code = run_command(spec, out, log);
    return {code, out.str(), log.str()};
}

// Column `name` of a CSV series, skipping '#' lines.
std::vector<double> csv_column(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<double> values;
    std::size_t column = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            column = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
            REQUIRE(column < header.size());
            continue;
        }
        values.push_back(std::stod(cells.at(column)));
    }
    return values;
}

const char* kFigure3 = R"({"n_receivers": 2, "sets": [{"g": 60, "delta": 500}, {"g": 61, "delta": 600}]})";

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({.command = "transmogrify"}).code == ExitCode::Usage);
    CHECK(run({.command = "simulate"}).code == ExitCode::Usage);
    CHECK(run({.command = "reproduce-fig"}).code == ExitCode::Usage);
    CHECK(run({.command = "reproduce-fig", .figure = 2}).code == ExitCode::Usage);
    CHECK(run({.command = "reproduce-fig", .figure = 12}).code == ExitCode::Usage);
    CHECK(run({.command = "reproduce-fig", .figure = 3, .points = 1}).code == ExitCode::Usage);
    CHECK(run({.command = "reproduce-fig", .figure = 3, .horizon = -5.0}).code == ExitCode::Usage);
    CHECK(run({.command = "sweep", .figure = 3}).code == ExitCode::Usage);
    CHECK_THROWS_AS(parse_axis("g:1:2"), ConfigError);
    CHECK_THROWS_AS(parse_axis("beta:1:2:3"), ConfigError);
    CHECK_THROWS_AS(parse_axis("g:1:2:0"), ConfigError);
    const SweepAxis axis = parse_axis("delta:500:600:3");
    CHECK(axis.param == SweepParam::Delta);
    CHECK(axis.values() == std::vector<double>{500.0, 550.0, 600.0});
}

TEST_CASE("config problems map to the parse-error exit code") {
    TempDir dir;
    CHECK(run({.command = "simulate", .config_path = dir.path / "missing.json"}).code == ExitCode::ParseError);
    const auto broken = dir.write("broken.json", "{\n  \"sets\": [\n    {\"g\": 60,, }\n  ]\n}");
    const Run r = run({.command = "simulate", .config_path = broken});
    CHECK(r.code == ExitCode::ParseError);
    CHECK(r.log.find("line 3") != std::string::npos);
}

TEST_CASE("simulate routes figure 3 to receiver 1") {
    TempDir dir;
    const auto config = dir.write("fig3.json", kFigure3);
    const auto report = dir.path / "report.json";
    const Run r = run({.command = "simulate", .config_path = config, .report_path = report});
    REQUIRE(r.code == ExitCode::Ok);
    const auto u_r1 = csv_column(r.out, "U_r1");
    CHECK(u_r1.size() == kDefaultGridPoints);
    CHECK(*std::max_element(u_r1.begin(), u_r1.end()) >= 0.95);
    const auto u_r2 = csv_column(r.out, "U_r2");
    CHECK(*std::max_element(u_r2.begin(), u_r2.end()) <= 0.1);

    std::ifstream in(report);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["selective"] == true);
    CHECK(std::abs(doc["t_star"].get<double>() - 4501.0691328) < 1e-3);
}

TEST_CASE("runs are byte-identical") {
    TempDir dir;
    const auto config = dir.write("fig3.json", kFigure3);
    for (auto format : {OutputFormat::Csv, OutputFormat::Json}) {
        const RunSpec spec{.command = "simulate", .config_path = config, .points = 1001, .format = format};
        const Run a = run(spec);
        const Run b = run(spec);
        REQUIRE(a.code == ExitCode::Ok);
        CHECK(a.out == b.out);
    }
    const Run file_a = run({.command = "reproduce-fig", .figure = 6, .points = 501, .out = dir.path / "a.csv"});
    const Run file_b = run({.command = "reproduce-fig", .figure = 6, .points = 501, .out = dir.path / "b.csv"});
    REQUIRE(file_a.code == ExitCode::Ok);
    std::stringstream a, b;
    a << std::ifstream(dir.path / "a.csv").rdbuf();
    b << std::ifstream(dir.path / "b.csv").rdbuf();
    CHECK(a.str() == b.str());
    CHECK_FALSE(a.str().empty());
}

TEST_CASE("horizon, points and phase flags") {
    const Run r = run({.command = "reproduce-fig", .figure = 3, .horizon = 6000.0, .points = 301,
                       .format = OutputFormat::Json, .strict_phase = true});
    REQUIRE(r.code == ExitCode::Ok);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["rows"].size() == 301);
    CHECK(doc["meta"]["horizon"] == 6000.0);
    CHECK(doc["rows"].back()[0] == 6000.0);

    const Run rotated = run({.command = "reproduce-fig", .figure = 3, .horizon = 6000.0, .points = 301,
                             .format = OutputFormat::Json});
    const auto rot = nlohmann::json::parse(rotated.out);
    // Populations agree, fidelity columns differ.
    CHECK(rot["rows"][150][2] == doc["rows"][150][2]);
    CHECK(rot["rows"][150][4] == doc["rows"][150][4]);
}

TEST_CASE("identical sets stop with the no-peak exit code") {
    TempDir dir;
    const auto config = dir.write("same.json", R"({"sets": [{"g": 60, "delta": 500}, {"g": 60, "delta": 500}]})");
    CHECK(run({.command = "simulate", .config_path = config}).code == ExitCode::NoTransferPeak);
}

TEST_CASE("sweep command") {
    const Run r = run({.command = "sweep", .figure = 3, .format = OutputFormat::Json,
                       .axes = {"delta:500:600:2"}, .threads = 2});
    REQUIRE(r.code == ExitCode::Ok);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.contains("cells"));
    CHECK(doc["cells"].size() == 2);
}

TEST_CASE("oracle check") {
    RunConfig config;
    config.network.n_receivers = 1;
    config.network.sets = {{60.0, 500.0}};
    const double horizon = default_horizon(config.network);

    const auto single = compare_with_oracle(config, 2, horizon);
    CHECK(single.dimension == 729);
    CHECK(single.single_times.size() == 50);
    CHECK(single.single_excitation_deviation <= 1e-8);
    CHECK(single.coherent_times.size() == 20);
    CHECK(single.coherent_times.back() == single.t_star);

    const auto fine = compare_with_oracle(config, 4, horizon);
    CHECK(fine.passed());
    CHECK(fine.fidelity_deviation <= 1e-4);
    CHECK(fine.mean_photon_deviation <= 1e-3);

    CHECK(run({.command = "oracle-check", .figure = 5, .cutoff = 3}).code == ExitCode::DimensionGuard);

    TempDir dir;
    const auto loud = dir.write("loud.json", R"({"qubit": {"alpha_re": 2.0}, "sets": [{"g": 60, "delta": 500}]})");
    CHECK(run({.command = "oracle-check", .config_path = loud, .cutoff = 2}).code == ExitCode::ExcessiveTruncation);

    const auto n1 = dir.write("n1.json", R"({"sets": [{"g": 60, "delta": 500}]})");
    const Run ok = run({.command = "oracle-check", .config_path = n1, .cutoff = 4});
    CHECK(ok.code == ExitCode::Ok);
    const auto doc = nlohmann::json::parse(ok.out);
    CHECK(doc["cutoff"] == 4);
    CHECK(doc["passed"] == true);
}
