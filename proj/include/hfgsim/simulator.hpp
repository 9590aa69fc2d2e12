#pragma once

// Simulation driver: explicit forward Euler realization of the discrete
// state transition function, with a stability guard, stride-based
// recording, and derived concentration series.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfgsim/architecture.hpp"
#include "hfgsim/config.hpp"
#include "hfgsim/errors.hpp"
#include "hfgsim/esn.hpp"
#include "hfgsim/ingest.hpp"

namespace hfgsim {

struct RecordedWarning {
    long step = 0;
    std::string bufferId;
    double factor = 0.0;
};

/// Time-indexed record of the run. Rows are steps k = 0, stride, 2*stride,
/// ..., K. Row i holds the state Q_B[k] and the firing assembled AT that
/// state (for k < K it is exactly the firing that advanced the state; the
/// final row's firing is evaluated but never applied).
struct Trajectory {
    std::vector<double> times;   // s
    int placeCount = 0;
    int capabilityCount = 0;
    std::vector<double> states;   // rows x placeCount, row-major
    std::vector<double> firings;  // rows x capabilityCount, row-major
    std::vector<RecordedWarning> warnings;
    PlaceIndex placeIndex;
    CapabilityIndex capabilityIndex;

    int rows() const { return static_cast<int>(times.size()); }
    std::span<const double> state_row(int row) const;
    std::span<const double> firing_row(int row) const;
};

/// Largest safe Euler step: one tenth of the smallest water-transport edge
/// time constant tau = R / (rho*g*(1/A_origin + 1/A_destination)), the exact
/// decay constant of a two-buffer linear exchange. Throws NoTransportEdges
/// when the architecture moves no water.
double stability_max_dt(const InstantiatedArchitecture& arch,
                        const PhysicalConstants& constants);

/// Per-edge time constants, in capability-index order.
struct EdgeTimeConstant {
    std::string capabilityId;
    double tau = 0.0;  // s
};
std::vector<EdgeTimeConstant> edge_time_constants(
    const InstantiatedArchitecture& arch, const PhysicalConstants& constants);

/// Runs the initial-value problem for the document's architecture and
/// config. Throws SimulationError on non-finite state or nitrogen
/// underflow. Appends a warning (step -1, empty buffer id, ratio dt/bound)
/// when dt exceeds the stability bound; clamp warnings carry their step.
Trajectory simulate(const ingest::ScenarioDocument& doc);
Trajectory simulate(const InstantiatedArchitecture& arch,
                    const SimulationConfig& config);

/// Nitrogen concentration series of one buffer: value kg/m^3 where the
/// water volume exceeds the guard, unset otherwise.
struct ConcentrationSeries {
    std::string bufferId;
    std::vector<std::optional<double>> values;  // aligned to Trajectory.times
};

/// One series per buffer, in water-place order.
std::vector<ConcentrationSeries> concentrations(const Trajectory& traj);

}  // namespace hfgsim
