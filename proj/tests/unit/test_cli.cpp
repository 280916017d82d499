#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thzcov/cli.hpp"

using namespace thzcov;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "thzcov_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("preset list names every experiment") {
    const Outcome o = run({"preset-list"});
    CHECK(o.code == 0);
    for (const char* name : {"fig5", "fig6", "fig7-indoor", "fig7-open", "fig7-2d", "fig8", "fig9", "fig10"}) {
        CHECK(o.out.find(name) != std::string::npos);
        CHECK(cli::find_preset(name) != nullptr);
    }
    CHECK(cli::find_preset("fig99") == nullptr);
}

TEST_CASE("analytic presets produce one row per grid value") {
    for (const char* name : {"fig5", "fig6", "fig7-indoor", "fig7-open", "fig7-2d", "fig8", "fig9"}) {
        const Outcome o = run({"analyze", "--preset", name});
        CAPTURE(name);
        REQUIRE(o.code == 0);
        const auto rows = lines(o.out);
        REQUIRE(rows.size() > 2);
        CHECK(rows.front().find("sweep_value") != std::string::npos);
    }
    const auto rows = lines(run({"analyze", "--preset", "fig7-indoor"}).out);
    CHECK(rows.size() == 1 + 23);
}

TEST_CASE("a lone serving distance gives a single row") {
    const Outcome o = run({"analyze", "--x00", "6"});
    REQUIRE(o.code == 0);
    const auto rows = lines(o.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].rfind("6,", 0) == 0);
}

TEST_CASE("sweep parsing") {
    const auto [name, grid] = cli::parse_sweep("tau_db=0:6:0.5");
    CHECK(name == "tau_db");
    CHECK(grid.values().size() == 13);
    CHECK(grid.values().back() == doctest::Approx(6.0));
    CHECK_THROWS(cli::parse_sweep("tau_db"));
    CHECK_THROWS(cli::parse_sweep("tau_db=1:0:0.5"));
    CHECK_THROWS(cli::parse_sweep("tau_db=0:1:0"));
    CHECK(run({"analyze", "--sweep", "bogus=0:1:0.5"}).code == cli::kConfigError);
    CHECK(run({"analyze", "--sweep", "tau_db=0:6:3"}).code == 0);
}

TEST_CASE("configuration errors exit with the config code") {
    CHECK(run({"simulate", "--x00", "6", "--trials", "0"}).code == cli::kConfigError);
    CHECK(run({"analyze", "--config", scratch("missing.cfg").string()}).code == cli::kConfigError);
    std::ofstream(scratch("bad.cfg")) << "h_a_m = 1.0\n";
    const Outcome bad = run({"analyze", "--config", scratch("bad.cfg").string()});
    CHECK(bad.code == cli::kConfigError);
    CHECK(bad.err.find("h_A > h_U") != std::string::npos);
    CHECK(run({"analyze", "--preset", "fig10"}).code == cli::kConfigError);
    CHECK(run({"analyze", "--no-such-flag"}).code == cli::kConfigError);
}

TEST_CASE("simulation output is deterministic in the seed") {
    const std::vector<std::string> args{"simulate", "--sweep", "x00=2:8:3", "--trials", "300", "--seed", "4"};
    const Outcome a = run(args);
    const Outcome b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(run(threaded).out == a.out);
}

TEST_CASE("compare reports tolerance failures") {
    const Outcome loose = run({"compare", "--x00", "6", "--trials", "400", "--tolerance", "0.5"});
    CHECK(loose.code == 0);
    CHECK(loose.err.find("result=pass") != std::string::npos);
    const Outcome strict = run({"compare", "--x00", "6", "--trials", "400", "--tolerance", "1e-9"});
    CHECK(strict.code == cli::kToleranceExceeded);
    CHECK(strict.err.find("result=fail") != std::string::npos);
    const Outcome planar = run({"compare", "--preset", "fig7-2d", "--sweep", "x00=4:8:4", "--trials", "200"});
    CHECK(planar.err.find("ordering_2d_le_3d=true") != std::string::npos);
}

TEST_CASE("manifest replay reproduces the output") {
    const fs::path csv = scratch("run.csv");
    const fs::path again = scratch("again.csv");
    const Outcome first = run({"compare", "--sweep", "x00=3:9:3", "--trials", "300", "--seed", "8",
                               "--tolerance", "0.5", "--out", csv.string()});
    REQUIRE(first.code == 0);
    const fs::path manifest = csv.string() + ".manifest.json";
    REQUIRE(fs::exists(manifest));
    const std::string text = slurp(manifest);
    for (const char* key : {"\"scenario\"", "\"seed\"", "\"version\"", "\"argv\"", "\"summary\""}) {
        CHECK(text.find(key) != std::string::npos);
    }
    REQUIRE(run({"replay", manifest.string(), "--out", again.string()}).code == 0);
    CHECK(slurp(csv) == slurp(again));
}

TEST_CASE("frequency presets read an absorption table") {
    const fs::path table = scratch("k.csv");
    std::ofstream(table) << "f_hz,k\n1.0e12,0.05\n1.05e12,0.07512\n1.1e12,0.12\n";
    const Outcome o = run({"analyze", "--preset", "fig10", "--k-table", table.string()});
    REQUIRE(o.code == 0);
    CHECK(lines(o.out).size() > 10);
}

TEST_CASE("the installed binary forwards to the same entry point") {
    const char* binary = std::getenv("THZCOV_BIN");
    if (binary == nullptr) return;
    const fs::path out = scratch("bin.csv");
    const std::string command = std::string(binary) + " analyze --x00 6 --out " + out.string();
    CHECK(std::system(command.c_str()) == 0);
    CHECK(slurp(out) == run({"analyze", "--x00", "6"}).out);
    CHECK(std::system((std::string(binary) + " simulate --trials 0 2>/dev/null").c_str()) != 0);
}
