#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hfgsim/cli/commands.hpp"
#include "hfgsim/cli/csv.hpp"
#include "hfgsim/esn.hpp"
#include "hfgsim/hfit.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace hfgsim;
using namespace hfgsim::cli;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("hfgsim_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) { return hfgtest::read_file(p.string()); }

int count_lines_with(const std::string& text, const std::string& needle) {
    int count = 0;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.find(needle) != std::string::npos) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("run with compare-ode writes three CSVs and exits zero") {
    TempDir dir("run_ok");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example1.xml");
    request.outputDir = (dir.path / "out").string();
    request.compareOde = true;
    std::ostringstream out, err;
    CHECK(cmd_run(request, out, err) == kExitOk);
    CHECK(fs::exists(dir.path / "out" / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "out" / "reference.csv"));
    CHECK(fs::exists(dir.path / "out" / "comparison.csv"));

    const std::string csv = slurp(dir.path / "out" / "trajectory.csv");
    CHECK(csv.rfind("time_s,V_lake1,m_lake1,c_lake1,V_point1,m_point1,c_point1,"
                    "U_a1,U_x1,U_x2,U_r1,U_rn1\n", 0) == 0);
    const std::string cmp = slurp(dir.path / "out" / "comparison.csv");
    CHECK(cmp.rfind("buffer,linf,rmse\n", 0) == 0);
    CHECK(count_lines_with(cmp, "lake1") == 1);
    CHECK(count_lines_with(cmp, "all") == 1);
}

TEST_CASE("running a missing scenario is an I/O error naming the path") {
    RunRequest request;
    request.scenarioPath = "missing.xml";
    std::ostringstream out, err;
    CHECK(cmd_run(request, out, err) == kExitIo);
    CHECK(err.str().find("missing.xml") != std::string::npos);
}

TEST_CASE("validate exits per the report") {
    std::ostringstream out, err;
    SUBCASE("bundled example2 is valid") {
        CHECK(cmd_validate(hfgtest::scenario_path("example2.xml"), out, err) == kExitOk);
    }
    SUBCASE("self-loop fixture names the invariant") {
        CHECK(cmd_validate(hfgtest::fixture_path("selfloop.xml"), out, err) ==
              kExitValidation);
        CHECK(out.str().find("self-loop") != std::string::npos);
    }
    SUBCASE("dangling reference fixture names the id") {
        CHECK(cmd_validate(hfgtest::fixture_path("dangling.xml"), out, err) ==
              kExitValidation);
        CHECK(err.str().find("lake9") != std::string::npos);
    }
    SUBCASE("unreadable path is an I/O error") {
        CHECK(cmd_validate("nonexistent.xml", out, err) == kExitIo);
    }
}

TEST_CASE("stability prints per-edge constants") {
    std::ostringstream out, err;
    SUBCASE("single-lake has one edge") {
        CHECK(cmd_stability(hfgtest::scenario_path("example1.xml"), out, err) == kExitOk);
        CHECK(count_lines_with(out.str(), "edge ") == 1);
        CHECK(out.str().find("stability_max_dt_s=") != std::string::npos);
    }
    SUBCASE("example3 has seven transport edges") {
        CHECK(cmd_stability(hfgtest::scenario_path("example3.xml"), out, err) == kExitOk);
        CHECK(count_lines_with(out.str(), "edge ") == 7);
    }
    SUBCASE("no rivers means no bound") {
        CHECK(cmd_stability(hfgtest::fixture_path("noriver.xml"), out, err) ==
              kExitValidation);
    }
}

TEST_CASE("emitted tensors match the built incidence matrices") {
    TempDir dir("tensors");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example1.xml");
    request.outputDir = (dir.path / "out").string();
    request.emitTensors = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(request, out, err) == kExitOk);

    const auto doc = hfgtest::load_scenario("example1.xml");
    const EngineeringSystemNet net = build_net(doc.architecture);
    CHECK(slurp(dir.path / "out" / "M.csv") == to_triplet_csv(net.tensors.net));
    CHECK(slurp(dir.path / "out" / "M_plus.csv") == to_triplet_csv(net.tensors.plus));
    CHECK(slurp(dir.path / "out" / "M_minus.csv") == to_triplet_csv(net.tensors.minus));
}

TEST_CASE("plots are emitted per populated buffer class") {
    TempDir dir("plots");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example1.xml");
    request.outputDir = (dir.path / "out").string();
    request.emitPlots = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(request, out, err) == kExitOk);
    CHECK(fs::exists(dir.path / "out" / "concentration_lake.svg"));
    CHECK(fs::exists(dir.path / "out" / "concentration_point.svg"));
    CHECK_FALSE(fs::exists(dir.path / "out" / "concentration_land.svg"));
    const std::string svg = slurp(dir.path / "out" / "concentration_lake.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("lake1") != std::string::npos);
}

TEST_CASE("the seasonal scenario emits charts for every populated class") {
    TempDir dir("plots3");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example3.xml");
    request.outputDir = (dir.path / "out").string();
    request.emitPlots = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(request, out, err) == kExitOk);
    for (const char* name : {"concentration_lake.svg", "concentration_land.svg",
                             "concentration_point.svg"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir.path / "out" / name));
    }
    // three lake series, each with hundreds of polyline points
    const std::string svg = slurp(dir.path / "out" / "concentration_lake.svg");
    CHECK(count_lines_with(svg, "<polyline") == 3);
}

TEST_CASE("two runs produce byte-identical output") {
    TempDir dir("determinism");
    auto runOnce = [&](const std::string& sub) {
        RunRequest request;
        request.scenarioPath = hfgtest::scenario_path("example1.xml");
        request.outputDir = (dir.path / sub).string();
        std::ostringstream out, err;
        REQUIRE(cmd_run(request, out, err) == kExitOk);
        return slurp(dir.path / sub / "trajectory.csv");
    };
    CHECK(runOnce("a") == runOnce("b"));
}

TEST_CASE("no temporary files survive a run") {
    TempDir dir("atomic");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example1.xml");
    request.outputDir = (dir.path / "out").string();
    request.compareOde = true;
    request.emitTensors = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(request, out, err) == kExitOk);
    for (const auto& entry : fs::directory_iterator(dir.path / "out")) {
        CHECK(entry.path().extension() != ".tmp");
    }
}

TEST_CASE("invalid scenarios exit with the validation code") {
    TempDir dir("invalid");
    RunRequest request;
    request.scenarioPath = hfgtest::fixture_path("selfloop.xml");
    request.outputDir = (dir.path / "out").string();
    std::ostringstream out, err;
    CHECK(cmd_run(request, out, err) == kExitValidation);
    CHECK_FALSE(fs::exists(dir.path / "out" / "trajectory.csv"));
}

TEST_CASE("override errors are reported as validation failures") {
    TempDir dir("override");
    RunRequest request;
    request.scenarioPath = hfgtest::scenario_path("example1.xml");
    request.outputDir = (dir.path / "out").string();
    request.strideOverride = 3;  // horizon 200 is not divisible by 3
    std::ostringstream out, err;
    CHECK(cmd_run(request, out, err) == kExitValidation);
}

TEST_CASE("run_many executes scenarios concurrently into separate directories") {
    TempDir dir("jobs");
    std::vector<RunRequest> requests(2);
    requests[0].scenarioPath = hfgtest::scenario_path("example1.xml");
    requests[0].outputDir = (dir.path / "one").string();
    requests[1].scenarioPath = hfgtest::scenario_path("example2.xml");
    requests[1].outputDir = (dir.path / "two").string();
    std::ostringstream out, err;
    CHECK(run_many(requests, 2, out, err) == kExitOk);
    CHECK(fs::exists(dir.path / "one" / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "two" / "trajectory.csv"));
}
