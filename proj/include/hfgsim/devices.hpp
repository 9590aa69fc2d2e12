#pragma once

// Constitutive device models: hydraulic head, resistance-controlled water
// transport, withdrawal clamping, complete-mixing nitrogen transport, and
// exogenous boundary rates. All functions are pure; the *Slice structures
// are prebuilt views that keep the per-step work allocation-free.

#include <span>
#include <string>
#include <vector>

#include "hfgsim/architecture.hpp"
#include "hfgsim/config.hpp"
#include "hfgsim/hfit.hpp"

namespace hfgsim {

/// Volume guard for the mixing division: below this a buffer is treated as
/// empty and carries no nitrogen.
constexpr double kVolumeGuard = 1e-9;  // m^3

/// Nitrogen entries may round to at most this far below zero before the
/// run is aborted as a modeling error.
constexpr double kNitrogenUnderflowTolerance = 1e-12;  // kg

/// Per-water-place geometry, aligned to the water sub-index of a PlaceIndex.
struct HeadParameters {
    std::vector<double> area;       // m^2, > 0
    std::vector<double> elevation;  // m
    std::vector<double> minVolume;  // m^3

    static HeadParameters build(const InstantiatedArchitecture& arch,
                                const PlaceIndex& placeIndex);
};

/// head = A^-1 (Q - Q_min) + z, elementwise over water places.
std::vector<double> hydraulic_head(std::span<const double> waterVolumes,
                                   const HeadParameters& params);

/// Water-transport columns of M restricted to water places, with their
/// resistances. Derived from the tensors themselves (not from the
/// capability endpoint fields) so the engine stays matrix-driven.
struct WaterTransportSlice {
    struct Column {
        int column = 0;     // capability column in U
        int originRow = 0;  // water place with M = -1
        int destRow = 0;    // water place with M = +1
        double resistance = 0.0;
        std::string capabilityId;
    };

    std::vector<Column> columns;

    static WaterTransportSlice build(const IncidenceTensors& tensors,
                                     const CapabilityIndex& capabilityIndex,
                                     const InstantiatedArchitecture& arch);
};

/// U_transp = R^-1 * rho*g * (-M_transp^T) * head. Rates are signed;
/// positive means origin-to-destination flow.
std::vector<double> water_transport_rates(std::span<const double> head,
                                          const WaterTransportSlice& slice,
                                          const PhysicalConstants& constants);

struct ClampWarning {
    int waterRow = 0;     // water place index of the clamped origin
    double factor = 0.0;  // applied to every withdrawing rate of that place
};

struct ClampedRates {
    std::vector<double> rates;  // parallel to slice.columns
    std::vector<ClampWarning> warnings;
};

/// Scales each place's withdrawing rates by a common factor when the total
/// withdrawal over dt would push its volume below minVolume; the scaled
/// withdrawal drains it exactly to minVolume. Inflows are never modified.
ClampedRates clamp_withdrawals(std::vector<double> rates,
                               std::span<const double> waterVolumes,
                               const HeadParameters& params,
                               const WaterTransportSlice& slice, double dt);

/// Nitrogen transport columns paired to their water partners.
struct NitrogenPairingSlice {
    struct Pair {
        int column = 0;           // nitrogen capability column in U
        int waterColumnPos = 0;   // position within WaterTransportSlice.columns
        int originWaterRow = 0;
        int originNitrogenRow = 0;
    };

    std::vector<Pair> pairs;

    static NitrogenPairingSlice build(const InstantiatedArchitecture& arch,
                                      const PlaceIndex& placeIndex,
                                      const CapabilityIndex& capabilityIndex,
                                      const WaterTransportSlice& waterSlice);
};

/// Complete mixing: mdot = m_origin * Vdot / V_origin when V_origin exceeds
/// the volume guard, else 0. Satisfies m*Vdot = V*mdot wherever it divides.
std::vector<double> nitrogen_transport_rates(std::span<const double> marking,
                                             std::span<const double> waterRates,
                                             const NitrogenPairingSlice& pairing);

/// Signals resolved to capability columns.
struct CompiledSignals {
    struct Entry {
        int column = 0;
        ExogenousSignal signal;
    };

    std::vector<Entry> entries;

    static CompiledSignals build(const InstantiatedArchitecture& arch,
                                 const CapabilityIndex& capabilityIndex);
};

/// Value of one signal at time t. Sinusoids are floored at zero; tables
/// hold the last knot at or before t and are zero before the first knot.
double signal_value(const ExogenousSignal& signal, double t);

/// Adds every signal's value at time t onto its Accept column of U.
void add_exogenous_rates(double t, const CompiledSignals& signals,
                         std::span<double> firing);

}  // namespace hfgsim
