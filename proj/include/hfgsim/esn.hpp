#pragma once

// The engineering system net: places are operand-at-buffer pairs, transitions
// are capabilities, arcs are the incidence matrices, and the marking Q_B is
// the stored water volume / nitrogen mass per place. Transitions fire
// instantaneously, so there is no transition marking and a single firing
// vector U drives the state transition Q_B[k+1] = Q_B[k] + M * U[k] * dt.

#include <span>
#include <vector>

#include "hfgsim/architecture.hpp"
#include "hfgsim/config.hpp"
#include "hfgsim/devices.hpp"
#include "hfgsim/hfit.hpp"

namespace hfgsim {

struct EngineeringSystemNet {
    PlaceIndex placeIndex;
    CapabilityIndex capabilityIndex;
    IncidenceTensors tensors;
    std::vector<double> marking;  // Q_B: m^3 for water places, kg for nitrogen places
};

/// Builds indices, tensors, and the initial marking from buffer initial fields.
EngineeringSystemNet build_net(const InstantiatedArchitecture& arch);

/// One state transition: marking += M * U * dt. Nitrogen entries within the
/// underflow tolerance of zero are clamped to zero; deeper underflow or any
/// non-finite entry aborts with a SimulationError carrying stepIndex.
void step(EngineeringSystemNet& net, std::span<const double> firing, double dt,
          long stepIndex);

struct AssembledFiring {
    std::vector<double> rates;  // U, aligned to the capability index
    std::vector<ClampWarning> warnings;
};

/// Assembles the firing vector for one step: Accept entries from the
/// exogenous signals, water-transport entries from the resistance model
/// (clamped), nitrogen-transport entries from complete mixing, Mix entries
/// identically zero. Prebuilt from the architecture; reusable across steps.
class FiringAssembler {
public:
    FiringAssembler(const InstantiatedArchitecture& arch,
                    const EngineeringSystemNet& net,
                    const PhysicalConstants& constants);

    AssembledFiring assemble(std::span<const double> marking, double t,
                             double dt) const;

    const HeadParameters& head_parameters() const { return headParams_; }
    const WaterTransportSlice& water_slice() const { return waterSlice_; }
    const NitrogenPairingSlice& nitrogen_pairing() const { return pairing_; }

private:
    int capabilityCount_;
    int waterCount_;
    PhysicalConstants constants_;
    HeadParameters headParams_;
    WaterTransportSlice waterSlice_;
    NitrogenPairingSlice pairing_;
    CompiledSignals signals_;
};

}  // namespace hfgsim
