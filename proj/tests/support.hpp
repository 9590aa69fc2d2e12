#pragma once

// Shared test helpers: bundled scenario loading and small architecture
// builders for hand-constructed and randomized cases.

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "hfgsim/architecture.hpp"
#include "hfgsim/ingest.hpp"

namespace hfgtest {

inline std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

inline std::string scenario_path(const std::string& name) {
    return std::string(HFGSIM_SCENARIO_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(HFGSIM_FIXTURE_DIR) + "/" + name;
}

inline hfgsim::ingest::ScenarioDocument load_scenario(const std::string& name) {
    return hfgsim::ingest::parse_scenario(read_file(scenario_path(name)));
}

// ---------------------------------------------------------------------------
// Programmatic builders
// ---------------------------------------------------------------------------

struct ArchBuilder {
    hfgsim::InstantiatedArchitecture arch;

    ArchBuilder() {
        arch.operands.push_back({"water", "water", hfgsim::QuantityKind::Volume});
        arch.operands.push_back({"nitrogen", "nitrogen", hfgsim::QuantityKind::Mass});
    }

    ArchBuilder& buffer(const std::string& id, hfgsim::BufferClass cls, double area,
                        double elev, double v0, double m0, double vmin = 0.0) {
        hfgsim::Buffer b;
        b.id = id;
        b.name = id;
        b.bufferClass = cls;
        b.surfaceArea = area;
        b.elevation = elev;
        b.minVolume = vmin;
        b.initialWaterVolume = v0;
        b.initialNitrogenMass = m0;
        arch.buffers.push_back(std::move(b));
        return *this;
    }

    ArchBuilder& lake(const std::string& id, double area, double elev, double v0,
                      double m0, double vmin = 0.0) {
        return buffer(id, hfgsim::BufferClass::Lake, area, elev, v0, m0, vmin);
    }

    ArchBuilder& point(const std::string& id, double area, double elev, double v0,
                       double m0, double vmin = 0.0) {
        return buffer(id, hfgsim::BufferClass::Point, area, elev, v0, m0, vmin);
    }

    ArchBuilder& land(const std::string& id, double area, double elev, double v0,
                      double m0, double vmin = 0.0) {
        return buffer(id, hfgsim::BufferClass::Land, area, elev, v0, m0, vmin);
    }

    ArchBuilder& accept_water(const std::string& id, const std::string& at) {
        hfgsim::Capability c;
        c.id = id;
        c.atBuffer = at;
        c.subject = at;
        c.operandId = "water";
        const hfgsim::Buffer* b = arch.find_buffer(at);
        c.cls = (b != nullptr && b->bufferClass == hfgsim::BufferClass::Land)
                    ? hfgsim::CapabilityClass::AcceptWaterAtLand
                    : hfgsim::CapabilityClass::AcceptWaterAtLake;
        arch.capabilities.push_back(std::move(c));
        return *this;
    }

    ArchBuilder& accept_nitrogen(const std::string& id, const std::string& at) {
        hfgsim::Capability c;
        c.id = id;
        c.atBuffer = at;
        c.subject = at;
        c.operandId = "nitrogen";
        c.cls = hfgsim::CapabilityClass::AcceptNitrogenAtLand;
        arch.capabilities.push_back(std::move(c));
        return *this;
    }

    ArchBuilder& mix(const std::string& id, const std::string& at) {
        hfgsim::Capability c;
        c.id = id;
        c.atBuffer = at;
        c.subject = at;
        const hfgsim::Buffer* b = arch.find_buffer(at);
        c.cls = b == nullptr ? hfgsim::CapabilityClass::MixAtLake
                : b->bufferClass == hfgsim::BufferClass::Lake
                    ? hfgsim::CapabilityClass::MixAtLake
                : b->bufferClass == hfgsim::BufferClass::Land
                    ? hfgsim::CapabilityClass::MixAtLand
                    : hfgsim::CapabilityClass::MixAtPoint;
        arch.capabilities.push_back(std::move(c));
        return *this;
    }

    ArchBuilder& transport_water(const std::string& id, const std::string& from,
                                 const std::string& to, double resistance) {
        hfgsim::Capability c;
        c.id = id;
        c.subject = id;
        c.operandId = "water";
        c.originBuffer = from;
        c.destinationBuffer = to;
        c.resistance = resistance;
        const hfgsim::Buffer* origin = arch.find_buffer(from);
        c.cls = (origin != nullptr && origin->bufferClass == hfgsim::BufferClass::Land)
                    ? hfgsim::CapabilityClass::TransportWaterOverLand
                    : hfgsim::CapabilityClass::TransportWaterByRiver;
        arch.capabilities.push_back(std::move(c));
        return *this;
    }

    ArchBuilder& transport_nitrogen(const std::string& id, const std::string& pairedWith) {
        const hfgsim::Capability* water = arch.find_capability(pairedWith);
        hfgsim::Capability c;
        c.id = id;
        c.subject = id;
        c.operandId = "nitrogen";
        if (water != nullptr) {
            c.originBuffer = water->originBuffer;
            c.destinationBuffer = water->destinationBuffer;
            c.cls = water->cls == hfgsim::CapabilityClass::TransportWaterOverLand
                        ? hfgsim::CapabilityClass::TransportNitrogenOverLand
                        : hfgsim::CapabilityClass::TransportNitrogenByRiver;
        }
        c.pairedWaterCapability = pairedWith;
        arch.capabilities.push_back(std::move(c));
        return *this;
    }

    ArchBuilder& constant_signal(const std::string& target, double value) {
        hfgsim::ExogenousSignal s;
        s.targetCapability = target;
        s.shape = hfgsim::SignalShape::Constant;
        s.value = value;
        arch.signals.push_back(std::move(s));
        return *this;
    }
};

/// Two lakes joined by one river pair; the workhorse for small hand cases.
inline hfgsim::InstantiatedArchitecture two_lake_exchange(double area1, double area2,
                                                          double z1, double z2,
                                                          double v1, double v2,
                                                          double m1, double m2,
                                                          double resistance) {
    ArchBuilder b;
    b.lake("upper", area1, z1, v1, m1)
        .point("lower", area2, z2, v2, m2)
        .mix("mix-upper", "upper")
        .mix("mix-lower", "lower")
        .transport_water("pipe", "upper", "lower", resistance)
        .transport_nitrogen("pipe-n", "pipe");
    return b.arch;
}

/// Random closed net (no accepts): a chain of lakes/points with random
/// parameters and river pairs, for conservation property tests.
inline hfgsim::InstantiatedArchitecture random_closed_net(std::mt19937& rng) {
    std::uniform_int_distribution<int> countDist(2, 6);
    std::uniform_real_distribution<double> areaDist(1e3, 1e5);
    std::uniform_real_distribution<double> elevDist(0.0, 20.0);
    std::uniform_real_distribution<double> depthDist(0.5, 8.0);
    std::uniform_real_distribution<double> concDist(0.0, 0.05);
    std::uniform_real_distribution<double> resistDist(5e3, 5e4);
    std::bernoulli_distribution pointDist(0.4);
    std::bernoulli_distribution extraEdgeDist(0.5);

    ArchBuilder b;
    const int n = countDist(rng);
    // One concentration for the whole net: the origin-based mixing formula
    // is exact under backflow only when both sides agree, and random
    // elevations do produce backflow.
    const double concentration = concDist(rng);
    for (int i = 0; i < n; ++i) {
        const std::string id = "b" + std::to_string(i);
        const double area = areaDist(rng);
        const double v0 = depthDist(rng) * area;
        const double m0 = concentration * v0;
        if (pointDist(rng)) {
            b.point(id, area, elevDist(rng), v0, m0);
        } else {
            b.lake(id, area, elevDist(rng), v0, m0);
        }
        b.mix("mix" + std::to_string(i), id);
    }
    int edge = 0;
    for (int i = 0; i + 1 < n; ++i) {
        const std::string rid = "edge" + std::to_string(edge++);
        b.transport_water(rid, "b" + std::to_string(i), "b" + std::to_string(i + 1),
                          resistDist(rng));
        b.transport_nitrogen(rid + "n", rid);
    }
    if (n > 2 && extraEdgeDist(rng)) {
        const std::string rid = "edge" + std::to_string(edge++);
        b.transport_water(rid, "b0", "b" + std::to_string(n - 1), resistDist(rng));
        b.transport_nitrogen(rid + "n", rid);
    }
    return b.arch;
}

}  // namespace hfgtest
