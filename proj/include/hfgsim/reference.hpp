#pragma once

// Continuous-time oracle for validating the discrete engine. The right-hand
// side is assembled from a per-buffer edge list derived directly from the
// architecture (never from the incidence matrices), so the oracle and the
// engine remain independent implementations of the same physics. Integration
// is classical fixed-step fourth-order Runge-Kutta.

#include <span>
#include <vector>

#include "hfgsim/architecture.hpp"
#include "hfgsim/config.hpp"
#include "hfgsim/ingest.hpp"
#include "hfgsim/simulator.hpp"

namespace hfgsim::reference {

/// Edge-list form of the watershed dynamics. State layout matches the
/// engine's place index (water block then nitrogen block) so trajectories
/// compare row for row.
class OdeSystem {
public:
    explicit OdeSystem(const InstantiatedArchitecture& arch,
                       const PhysicalConstants& constants);

    int state_size() const { return stateSize_; }
    std::vector<double> initial_state() const;

    /// d(state)/dt at (state, t), with the same withdrawal clamping and
    /// volume guards as the discrete devices; clampDt is the drawdown
    /// window used by the clamp (the integrator passes its own step).
    std::vector<double> rhs(std::span<const double> state, double t,
                            double clampDt) const;

    /// Capability-aligned rate vector at (state, t), for recording rows in
    /// the shared Trajectory format.
    std::vector<double> firing_vector(std::span<const double> state, double t,
                                      double clampDt) const;

    const PlaceIndex& place_index() const { return placeIndex_; }
    const CapabilityIndex& capability_index() const { return capabilityIndex_; }

private:
    struct Edge {
        int originWater = 0;
        int destWater = 0;
        int originNitrogen = 0;
        int destNitrogen = 0;
        double resistance = 0.0;
        bool carriesNitrogen = false;
        int waterColumn = 0;
        int nitrogenColumn = -1;
    };
    struct Input {
        int stateIndex = 0;
        int column = 0;
        ExogenousSignal signal;
    };
    struct RateSet {
        std::vector<double> edgeWater;
        std::vector<double> edgeNitrogen;
        std::vector<double> inputValues;
    };

    RateSet compute_rates(std::span<const double> state, double t,
                          double clampDt) const;

    int stateSize_ = 0;
    int waterCount_ = 0;
    PhysicalConstants constants_;
    std::vector<double> area_;
    std::vector<double> elevation_;
    std::vector<double> minVolume_;
    std::vector<double> initial_;
    std::vector<Edge> edges_;
    std::vector<Input> inputs_;
    PlaceIndex placeIndex_;
    CapabilityIndex capabilityIndex_;
};

/// Integrates the document's initial-value problem with fixed-step RK4 at
/// dtRef, recording rows at the document's recording times (every
/// config.stride * config.dt seconds over the same horizon). dtRef must
/// divide the recording interval; throws std::invalid_argument otherwise
/// and SimulationError on non-finite state.
Trajectory rk4_integrate(const ingest::ScenarioDocument& doc, double dtRef);

struct BufferErrorMetrics {
    std::string bufferId;
    double linf = 0.0;  // kg/m^3
    double rmse = 0.0;  // kg/m^3
};

struct ComparisonMetrics {
    std::vector<BufferErrorMetrics> perBuffer;
    double linf = 0.0;
    double rmse = 0.0;
};

/// Per-buffer concentration error of trajectory b against a, with b
/// linearly resampled onto a's timestamps. Throws MismatchedArchitecture
/// when the place sets differ. Rows where either concentration is
/// undefined are skipped.
ComparisonMetrics compare_trajectories(const Trajectory& a, const Trajectory& b);

}  // namespace hfgsim::reference
