#include "hfgsim/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace hfgsim {

std::span<const double> Trajectory::state_row(int row) const {
    return std::span<const double>(states).subspan(
        static_cast<size_t>(row) * placeCount, placeCount);
}

std::span<const double> Trajectory::firing_row(int row) const {
    return std::span<const double>(firings).subspan(
        static_cast<size_t>(row) * capabilityCount, capabilityCount);
}

std::vector<EdgeTimeConstant> edge_time_constants(
    const InstantiatedArchitecture& arch, const PhysicalConstants& constants) {
    std::vector<EdgeTimeConstant> edges;
    const CapabilityIndex index = build_capability_index(arch);
    for (int col = 0; col < index.size(); ++col) {
        if (!is_water_transport(index.classes[col])) continue;
        const Capability& c = arch.capabilities[index.archPositions[col]];
        const Buffer* origin = arch.find_buffer(c.originBuffer);
        const Buffer* dest = arch.find_buffer(c.destinationBuffer);
        const double tau = c.resistance /
                           (constants.rho * constants.g *
                            (1.0 / origin->surfaceArea + 1.0 / dest->surfaceArea));
        edges.push_back({c.id, tau});
    }
    return edges;
}

double stability_max_dt(const InstantiatedArchitecture& arch,
                        const PhysicalConstants& constants) {
    const std::vector<EdgeTimeConstant> edges = edge_time_constants(arch, constants);
    if (edges.empty()) throw NoTransportEdges();
    double tauMin = edges.front().tau;
    for (const EdgeTimeConstant& e : edges) tauMin = std::min(tauMin, e.tau);
    return tauMin / 10.0;
}

Trajectory simulate(const InstantiatedArchitecture& arch,
                    const SimulationConfig& config) {
    if (!config.valid()) {
        throw std::invalid_argument(
            "simulation config invalid (dt > 0, horizon >= 1, stride divides horizon)");
    }

    EngineeringSystemNet net = build_net(arch);
    const FiringAssembler assembler(arch, net, config.constants);

    Trajectory traj;
    traj.placeIndex = net.placeIndex;
    traj.capabilityIndex = net.capabilityIndex;
    traj.placeCount = net.placeIndex.size();
    traj.capabilityCount = net.capabilityIndex.size();

    const long rows = config.horizonSteps / config.stride + 1;
    traj.times.reserve(rows);
    traj.states.reserve(rows * traj.placeCount);
    traj.firings.reserve(rows * traj.capabilityCount);

    try {
        const double bound = stability_max_dt(arch, config.constants);
        if (config.dt > bound) {
            traj.warnings.push_back({-1, "", config.dt / bound});
        }
    } catch (const NoTransportEdges&) {
        // nothing to destabilize
    }

    for (long k = 0; k <= config.horizonSteps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        const AssembledFiring firing = assembler.assemble(net.marking, t, config.dt);

        if (k % config.stride == 0) {
            traj.times.push_back(t);
            traj.states.insert(traj.states.end(), net.marking.begin(), net.marking.end());
            traj.firings.insert(traj.firings.end(), firing.rates.begin(),
                                firing.rates.end());
        }
        if (k == config.horizonSteps) break;

        for (const ClampWarning& w : firing.warnings) {
            traj.warnings.push_back(
                {k, net.placeIndex.places[w.waterRow].bufferId, w.factor});
        }
        step(net, firing.rates, config.dt, k);
    }
    return traj;
}

Trajectory simulate(const ingest::ScenarioDocument& doc) {
    return simulate(doc.architecture, doc.config);
}

std::vector<ConcentrationSeries> concentrations(const Trajectory& traj) {
    std::vector<ConcentrationSeries> series;
    const int waterCount = traj.placeIndex.waterCount;
    series.reserve(waterCount);
    for (int w = 0; w < waterCount; ++w) {
        ConcentrationSeries s;
        s.bufferId = traj.placeIndex.places[w].bufferId;
        const int n = traj.placeIndex.nitrogen_index_of(s.bufferId);
        s.values.reserve(traj.rows());
        for (int row = 0; row < traj.rows(); ++row) {
            const auto state = traj.state_row(row);
            if (state[w] > kVolumeGuard) {
                s.values.push_back(state[n] / state[w]);
            } else {
                s.values.push_back(std::nullopt);
            }
        }
        series.push_back(std::move(s));
    }
    return series;
}

}  // namespace hfgsim
