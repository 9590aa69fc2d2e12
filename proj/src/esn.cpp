#include "hfgsim/esn.hpp"

#include <cmath>

#include "hfgsim/errors.hpp"

namespace hfgsim {

EngineeringSystemNet build_net(const InstantiatedArchitecture& arch) {
    EngineeringSystemNet net;
    net.placeIndex = build_place_index(arch);
    net.capabilityIndex = build_capability_index(arch);
    net.tensors = build_incidence(arch, net.placeIndex, net.capabilityIndex);
    net.marking.resize(net.placeIndex.size());
    for (int i = 0; i < net.placeIndex.size(); ++i) {
        const auto& place = net.placeIndex.places[i];
        const Buffer& b = arch.buffers[place.bufferPos];
        net.marking[i] = place.kind == QuantityKind::Volume ? b.initialWaterVolume
                                                            : b.initialNitrogenMass;
    }
    return net;
}

void step(EngineeringSystemNet& net, std::span<const double> firing, double dt,
          long stepIndex) {
    // Pre-scale so each transport column contributes exactly +-U*dt at its
    // two places; closed-system sums then telescope to rounding only.
    std::vector<double> scaled(firing.size());
    for (size_t i = 0; i < firing.size(); ++i) scaled[i] = firing[i] * dt;

    std::vector<double> delta(net.marking.size(), 0.0);
    for (const SparseMatrix::Triplet& t : net.tensors.net.entries) {
        delta[t.row] += t.value * scaled[t.col];
    }

    const int waterCount = net.placeIndex.waterCount;
    for (size_t i = 0; i < net.marking.size(); ++i) {
        double next = net.marking[i] + delta[i];
        if (!std::isfinite(next)) {
            throw SimulationError(SimulationAbort::NonFiniteState, stepIndex,
                                  "non-finite marking at place '" +
                                      net.placeIndex.places[i].bufferId +
                                      "' on step " + std::to_string(stepIndex));
        }
        if (static_cast<int>(i) >= waterCount && next < 0.0) {
            if (next < -kNitrogenUnderflowTolerance) {
                throw SimulationError(SimulationAbort::NegativeNitrogen, stepIndex,
                                      "nitrogen underflow at buffer '" +
                                          net.placeIndex.places[i].bufferId +
                                          "' on step " + std::to_string(stepIndex));
            }
            next = 0.0;
        }
        net.marking[i] = next;
    }
}

FiringAssembler::FiringAssembler(const InstantiatedArchitecture& arch,
                                 const EngineeringSystemNet& net,
                                 const PhysicalConstants& constants)
    : capabilityCount_(net.capabilityIndex.size()),
      waterCount_(net.placeIndex.waterCount),
      constants_(constants),
      headParams_(HeadParameters::build(arch, net.placeIndex)),
      waterSlice_(WaterTransportSlice::build(net.tensors, net.capabilityIndex, arch)),
      pairing_(NitrogenPairingSlice::build(arch, net.placeIndex, net.capabilityIndex,
                                           waterSlice_)),
      signals_(CompiledSignals::build(arch, net.capabilityIndex)) {}

AssembledFiring FiringAssembler::assemble(std::span<const double> marking, double t,
                                          double dt) const {
    AssembledFiring out;
    out.rates.assign(capabilityCount_, 0.0);

    add_exogenous_rates(t, signals_, out.rates);

    const std::span<const double> waterVolumes = marking.subspan(0, waterCount_);
    const std::vector<double> head = hydraulic_head(waterVolumes, headParams_);
    ClampedRates clamped =
        clamp_withdrawals(water_transport_rates(head, waterSlice_, constants_),
                          waterVolumes, headParams_, waterSlice_, dt);
    for (size_t i = 0; i < waterSlice_.columns.size(); ++i) {
        out.rates[waterSlice_.columns[i].column] = clamped.rates[i];
    }

    const std::vector<double> nitrogenRates =
        nitrogen_transport_rates(marking, clamped.rates, pairing_);
    for (size_t i = 0; i < pairing_.pairs.size(); ++i) {
        out.rates[pairing_.pairs[i].column] = nitrogenRates[i];
    }

    out.warnings = std::move(clamped.warnings);
    return out;
}

}  // namespace hfgsim
