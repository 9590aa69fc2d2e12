#include <doctest.h>

#include <cmath>

#include "hfgsim/errors.hpp"
#include "hfgsim/simulator.hpp"
#include "support.hpp"

using namespace hfgsim;
using doctest::Approx;

namespace {

std::vector<double> lake_concentration(const Trajectory& traj, const std::string& id) {
    for (const ConcentrationSeries& s : concentrations(traj)) {
        if (s.bufferId != id) continue;
        std::vector<double> values;
        for (const auto& v : s.values) {
            REQUIRE(v.has_value());
            values.push_back(*v);
        }
        return values;
    }
    FAIL("no such buffer");
    return {};
}

}  // namespace

TEST_CASE("stability bound equals one tenth of the edge time constant") {
    // R = 1e6, both areas 100 m^2, rho g = 9810:
    // tau = 1e6 / (9810 * (1/100 + 1/100)) = 5096.839959...
    auto arch = hfgtest::two_lake_exchange(100, 100, 1, 0, 1000, 500, 0, 0, 1e6);
    const double tau = 1e6 / (9810.0 * 0.02);
    CHECK(stability_max_dt(arch, {}) == Approx(tau / 10.0).epsilon(1e-12));

    const auto edges = edge_time_constants(arch, {});
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].capabilityId == "pipe");
    CHECK(edges[0].tau == Approx(5096.8399592252803).epsilon(1e-12));
}

TEST_CASE("the stiffest edge wins") {
    hfgtest::ArchBuilder b;
    b.lake("a", 100, 2, 1000, 0)
        .lake("b", 100, 1, 1000, 0)
        .point("c", 100, 0, 1000, 0)
        .transport_water("slow", "a", "b", 1e6)
        .transport_water("fast", "b", "c", 1e5);
    const double tauFast = 1e5 / (9810.0 * 0.02);
    CHECK(stability_max_dt(b.arch, {}) == Approx(tauFast / 10.0).epsilon(1e-12));
}

TEST_CASE("no transport edges means no bound") {
    hfgtest::ArchBuilder b;
    b.lake("a", 100, 2, 1000, 0);
    CHECK_THROWS_AS(stability_max_dt(b.arch, {}), NoTransportEdges);
}

TEST_CASE("explicit Euler is stable at the bound and diverges at 25x the bound") {
    // symmetric pair with a tiny elevation offset seeding the head difference
    auto arch = hfgtest::two_lake_exchange(100, 100, 1e-3, 0.0, 1000, 1000, 0, 0, 1e6);
    const double bound = stability_max_dt(arch, {});

    auto headDifference = [&](const Trajectory& traj, int row) {
        const auto s = traj.state_row(row);
        return (s[0] / 100.0 + 1e-3) - s[1] / 100.0;
    };

    SUBCASE("dt at the bound decays the head difference") {
        SimulationConfig config;
        config.dt = bound;
        config.horizonSteps = 100;
        const Trajectory traj = simulate(arch, config);
        const double initial = std::abs(headDifference(traj, 0));
        const double last = std::abs(headDifference(traj, traj.rows() - 1));
        CHECK(std::isfinite(last));
        CHECK(last < initial);
    }
    SUBCASE("dt at 25x the bound blows the head difference up") {
        SimulationConfig config;
        config.dt = 25.0 * bound;
        config.horizonSteps = 100;
        double growth = 0.0;
        try {
            const Trajectory traj = simulate(arch, config);
            const double initial = std::abs(headDifference(traj, 0));
            for (int row = 0; row < traj.rows(); ++row) {
                growth = std::max(growth, std::abs(headDifference(traj, row)) / initial);
            }
        } catch (const SimulationError&) {
            growth = std::numeric_limits<double>::infinity();
        }
        CHECK(growth > 10.0);
    }
}

TEST_CASE("single-lake concentration flushes out monotonically") {
    const Trajectory traj = simulate(hfgtest::load_scenario("example1.xml"));
    const std::vector<double> conc = lake_concentration(traj, "lake1");
    REQUIRE(conc.size() > 10);
    for (size_t i = 2; i < conc.size(); ++i) {
        CHECK(conc[i] <= conc[i - 1] + 1e-12 * conc.front());
    }
    CHECK(conc.back() < 0.8 * conc.front());
}

TEST_CASE("all three lake concentrations decrease in the three-lake system") {
    const Trajectory traj = simulate(hfgtest::load_scenario("example2.xml"));
    for (const char* lake : {"lake1", "lake2", "lake3"}) {
        CAPTURE(lake);
        const std::vector<double> conc = lake_concentration(traj, lake);
        for (size_t i = 2; i < conc.size(); ++i) {
            CHECK(conc[i] <= conc[i - 1] + 1e-12 * conc.front());
        }
        CHECK(conc.back() < conc.front());
    }
}

TEST_CASE("a flat, unsignaled system is a fixed point") {
    auto arch = hfgtest::two_lake_exchange(100, 100, 3, 3, 500, 500, 2, 2, 1e4);
    SimulationConfig config;
    config.dt = 10.0;
    config.horizonSteps = 20;
    const Trajectory traj = simulate(arch, config);
    const auto first = traj.state_row(0);
    const auto last = traj.state_row(traj.rows() - 1);
    for (int i = 0; i < traj.placeCount; ++i) CHECK(first[i] == last[i]);
}

TEST_CASE("concentration helper guards empty volumes") {
    auto arch = hfgtest::two_lake_exchange(100, 100, 3, 3, 500, 0.0, 2, 1, 1e4);
    arch.buffers[1].initialWaterVolume = 0.0;  // lower buffer starts dry
    SimulationConfig config;
    config.dt = 1.0;
    config.horizonSteps = 1;
    const Trajectory traj = simulate(arch, config);
    const auto series = concentrations(traj);
    REQUIRE(series.size() == 2);
    CHECK(series[0].values[0].has_value());
    CHECK(series[0].values[0] == Approx(2.0 / 500.0));
    CHECK_FALSE(series[1].values[0].has_value());  // undefined, not infinite
}

TEST_CASE("halving dt halves the dt-sensitivity of the endpoint (first order)") {
    const auto doc = hfgtest::load_scenario("example1.xml");

    auto endpoint = [&](double dt, long steps) {
        SimulationConfig config = doc.config;
        config.dt = dt;
        config.horizonSteps = steps;
        config.stride = steps;
        const Trajectory traj = simulate(doc.architecture, config);
        return lake_concentration(traj, "lake1").back();
    };

    const double base = doc.config.dt;
    const long steps = doc.config.horizonSteps;
    const double c1 = endpoint(base, steps);
    const double c2 = endpoint(base / 2.0, steps * 2);
    const double c3 = endpoint(base / 4.0, steps * 4);
    const double ratio = std::abs(c2 - c3) / std::abs(c1 - c2);
    CHECK(ratio > 0.4);
    CHECK(ratio < 0.6);
}

TEST_CASE("a table signal drives the accept column with hold-last values") {
    hfgtest::ArchBuilder b;
    b.lake("lake1", 1e4, 2, 5e4, 500).mix("x1", "lake1").accept_water("a1", "lake1");
    ExogenousSignal s;
    s.targetCapability = "a1";
    s.shape = SignalShape::Table;
    s.table = {{25.0, 0.5}, {50.0, 0.125}};
    b.arch.signals.push_back(s);

    SimulationConfig config;
    config.dt = 10.0;
    config.horizonSteps = 8;
    const Trajectory traj = simulate(b.arch, config);
    const int accept = traj.capabilityIndex.index_of("a1");
    const std::vector<double> expected = {0, 0, 0, 0.5, 0.5, 0.125, 0.125, 0.125, 0.125};
    REQUIRE(traj.rows() == 9);
    for (int row = 0; row < traj.rows(); ++row) {
        CHECK(traj.firing_row(row)[accept] == expected[row]);
    }
    // the marking integrates exactly the held rates
    const int lake = traj.placeIndex.water_index_of("lake1");
    const double gained =
        traj.state_row(8)[lake] - traj.state_row(0)[lake];
    CHECK(gained == Approx(10.0 * (0.5 + 0.5 + 0.125 + 0.125 + 0.125)).epsilon(1e-12));
}

TEST_CASE("config validation rejects a stride that does not divide the horizon") {
    const auto doc = hfgtest::load_scenario("example1.xml");
    SimulationConfig config = doc.config;
    config.stride = 3;  // horizon is 200
    CHECK_THROWS_AS(simulate(doc.architecture, config), std::invalid_argument);
}

TEST_CASE("simulate warns, but does not abort, above the stability bound") {
    const auto doc = hfgtest::load_scenario("example1.xml");
    SimulationConfig config = doc.config;
    config.dt = 1000.0;  // bound is ~340 s
    config.horizonSteps = 10;
    config.stride = 1;
    const Trajectory traj = simulate(doc.architecture, config);
    bool found = false;
    for (const RecordedWarning& w : traj.warnings) {
        if (w.step == -1) {
            found = true;
            CHECK(w.factor == Approx(1000.0 / stability_max_dt(doc.architecture,
                                                               config.constants)));
        }
    }
    CHECK(found);
}

TEST_CASE("clamped volumes never fall below their minimum") {
    const auto doc = hfgtest::load_scenario("example3.xml");
    const Trajectory traj = simulate(doc);
    long clampEvents = 0;
    for (const RecordedWarning& w : traj.warnings) {
        if (w.step >= 0) ++clampEvents;
    }
    CHECK(clampEvents > 0);  // dry seasons drain the steeper land segments
    for (int row = 0; row < traj.rows(); ++row) {
        const auto state = traj.state_row(row);
        for (int w = 0; w < traj.placeIndex.waterCount; ++w) {
            const Buffer* b =
                doc.architecture.find_buffer(traj.placeIndex.places[w].bufferId);
            CHECK(state[w] >= b->minVolume - 1e-9);
        }
    }
}

TEST_CASE("warning lists are reproducible") {
    const auto doc = hfgtest::load_scenario("example3.xml");
    SimulationConfig config = doc.config;
    config.horizonSteps = 3000;
    config.stride = 100;
    const Trajectory a = simulate(doc.architecture, config);
    const Trajectory b = simulate(doc.architecture, config);
    REQUIRE(a.warnings.size() == b.warnings.size());
    CHECK(!a.warnings.empty());  // the first dry season clamps land runoff
    for (size_t i = 0; i < a.warnings.size(); ++i) {
        CHECK(a.warnings[i].step == b.warnings[i].step);
        CHECK(a.warnings[i].bufferId == b.warnings[i].bufferId);
        CHECK(a.warnings[i].factor == b.warnings[i].factor);
    }
}

TEST_CASE("trajectory rows follow the stride") {
    const auto doc = hfgtest::load_scenario("example1.xml");
    SimulationConfig config = doc.config;
    config.stride = 10;
    const Trajectory traj = simulate(doc.architecture, config);
    CHECK(traj.rows() == doc.config.horizonSteps / 10 + 1);
    for (int row = 1; row < traj.rows(); ++row) {
        CHECK(traj.times[row] - traj.times[row - 1] ==
              Approx(config.dt * 10).epsilon(1e-12));
    }
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == Approx(config.dt * doc.config.horizonSteps));
}
