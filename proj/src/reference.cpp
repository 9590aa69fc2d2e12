#include "hfgsim/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "hfgsim/devices.hpp"
#include "hfgsim/errors.hpp"

namespace hfgsim::reference {

OdeSystem::OdeSystem(const InstantiatedArchitecture& arch,
                     const PhysicalConstants& constants)
    : constants_(constants),
      placeIndex_(build_place_index(arch)),
      capabilityIndex_(build_capability_index(arch)) {
    stateSize_ = placeIndex_.size();
    waterCount_ = placeIndex_.waterCount;

    area_.resize(waterCount_);
    elevation_.resize(waterCount_);
    minVolume_.resize(waterCount_);
    initial_.resize(stateSize_);
    for (int i = 0; i < stateSize_; ++i) {
        const Buffer& b = arch.buffers[placeIndex_.places[i].bufferPos];
        if (i < waterCount_) {
            area_[i] = b.surfaceArea;
            elevation_[i] = b.elevation;
            minVolume_[i] = b.minVolume;
            initial_[i] = b.initialWaterVolume;
        } else {
            initial_[i] = b.initialNitrogenMass;
        }
    }

    // Edge list straight from the capability endpoint fields; the engine's
    // matrix product never feeds this path.
    for (const Capability& c : arch.capabilities) {
        if (!is_water_transport(c.cls)) continue;
        Edge e;
        e.originWater = placeIndex_.water_index_of(c.originBuffer);
        e.destWater = placeIndex_.water_index_of(c.destinationBuffer);
        e.originNitrogen = placeIndex_.nitrogen_index_of(c.originBuffer);
        e.destNitrogen = placeIndex_.nitrogen_index_of(c.destinationBuffer);
        e.resistance = c.resistance;
        e.waterColumn = capabilityIndex_.index_of(c.id);
        e.nitrogenColumn = -1;
        for (const Capability& n : arch.capabilities) {
            if (is_nitrogen_transport(n.cls) && n.pairedWaterCapability == c.id) {
                e.carriesNitrogen = true;
                e.nitrogenColumn = capabilityIndex_.index_of(n.id);
                break;
            }
        }
        edges_.push_back(e);
    }

    for (const ExogenousSignal& s : arch.signals) {
        const Capability* target = arch.find_capability(s.targetCapability);
        const Operand* op = arch.find_operand(target->operandId);
        Input input;
        input.stateIndex = op->kind == QuantityKind::Volume
                               ? placeIndex_.water_index_of(target->atBuffer)
                               : placeIndex_.nitrogen_index_of(target->atBuffer);
        input.column = capabilityIndex_.index_of(target->id);
        input.signal = s;
        inputs_.push_back(std::move(input));
    }
}

std::vector<double> OdeSystem::initial_state() const { return initial_; }

OdeSystem::RateSet OdeSystem::compute_rates(std::span<const double> state, double t,
                                            double clampDt) const {
    RateSet rates;
    rates.edgeWater.resize(edges_.size());
    rates.edgeNitrogen.assign(edges_.size(), 0.0);

    const double rhoG = constants_.rho * constants_.g;
    auto head = [&](int w) {
        return (state[w] - minVolume_[w]) / area_[w] + elevation_[w];
    };
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        rates.edgeWater[i] =
            rhoG / e.resistance * (head(e.originWater) - head(e.destWater));
    }

    // Same proportional withdrawal clamp as the discrete devices.
    std::vector<double> withdrawal(waterCount_, 0.0);
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (rates.edgeWater[i] > 0.0) {
            withdrawal[e.originWater] += rates.edgeWater[i];
        } else if (rates.edgeWater[i] < 0.0) {
            withdrawal[e.destWater] -= rates.edgeWater[i];
        }
    }
    std::vector<double> factor(waterCount_, 1.0);
    for (int p = 0; p < waterCount_; ++p) {
        if (withdrawal[p] <= 0.0) continue;
        const double available = state[p] - minVolume_[p];
        const double demanded = withdrawal[p] * clampDt;
        if (demanded <= available) continue;
        factor[p] = available > 0.0 ? available / demanded : 0.0;
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (rates.edgeWater[i] > 0.0) {
            rates.edgeWater[i] *= factor[e.originWater];
        } else if (rates.edgeWater[i] < 0.0) {
            rates.edgeWater[i] *= factor[e.destWater];
        }
    }

    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (!e.carriesNitrogen) continue;
        const double volume = state[e.originWater];
        if (volume <= kVolumeGuard) continue;
        rates.edgeNitrogen[i] =
            state[e.originNitrogen] * rates.edgeWater[i] / volume;
    }

    rates.inputValues.resize(inputs_.size());
    for (size_t i = 0; i < inputs_.size(); ++i) {
        rates.inputValues[i] = signal_value(inputs_[i].signal, t);
    }
    return rates;
}

std::vector<double> OdeSystem::rhs(std::span<const double> state, double t,
                                   double clampDt) const {
    const RateSet rates = compute_rates(state, t, clampDt);
    std::vector<double> derivative(stateSize_, 0.0);
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        derivative[e.originWater] -= rates.edgeWater[i];
        derivative[e.destWater] += rates.edgeWater[i];
        if (e.carriesNitrogen) {
            derivative[e.originNitrogen] -= rates.edgeNitrogen[i];
            derivative[e.destNitrogen] += rates.edgeNitrogen[i];
        }
    }
    for (size_t i = 0; i < inputs_.size(); ++i) {
        derivative[inputs_[i].stateIndex] += rates.inputValues[i];
    }
    return derivative;
}

std::vector<double> OdeSystem::firing_vector(std::span<const double> state, double t,
                                             double clampDt) const {
    const RateSet rates = compute_rates(state, t, clampDt);
    std::vector<double> firing(capabilityIndex_.size(), 0.0);
    for (size_t i = 0; i < edges_.size(); ++i) {
        firing[edges_[i].waterColumn] = rates.edgeWater[i];
        if (edges_[i].nitrogenColumn >= 0) {
            firing[edges_[i].nitrogenColumn] = rates.edgeNitrogen[i];
        }
    }
    for (size_t i = 0; i < inputs_.size(); ++i) {
        firing[inputs_[i].column] += rates.inputValues[i];
    }
    return firing;
}

Trajectory rk4_integrate(const ingest::ScenarioDocument& doc, double dtRef) {
    const SimulationConfig& config = doc.config;
    if (!config.valid() || !(dtRef > 0.0) || !std::isfinite(dtRef)) {
        throw std::invalid_argument("rk4_integrate requires a valid config and dtRef > 0");
    }
    const double recordInterval = config.dt * static_cast<double>(config.stride);
    const long stepsPerRecord = std::llround(recordInterval / dtRef);
    if (stepsPerRecord < 1 ||
        std::abs(stepsPerRecord * dtRef - recordInterval) > 1e-9 * recordInterval) {
        throw std::invalid_argument("dtRef must divide the recording interval");
    }

    const OdeSystem system(doc.architecture, config.constants);
    const int n = system.state_size();

    Trajectory traj;
    traj.placeIndex = system.place_index();
    traj.capabilityIndex = system.capability_index();
    traj.placeCount = n;
    traj.capabilityCount = traj.capabilityIndex.size();

    std::vector<double> y = system.initial_state();
    const long records = config.horizonSteps / config.stride;

    auto record = [&](long recordIdx) {
        const double t = static_cast<double>(recordIdx) * recordInterval;
        traj.times.push_back(t);
        traj.states.insert(traj.states.end(), y.begin(), y.end());
        const std::vector<double> firing = system.firing_vector(y, t, dtRef);
        traj.firings.insert(traj.firings.end(), firing.begin(), firing.end());
    };

    record(0);
    std::vector<double> k1, k2, k3, k4, stage(n);
    long stepIndex = 0;
    for (long r = 0; r < records; ++r) {
        const double base = static_cast<double>(r) * recordInterval;
        for (long s = 0; s < stepsPerRecord; ++s, ++stepIndex) {
            const double t = base + static_cast<double>(s) * dtRef;
            k1 = system.rhs(y, t, dtRef);
            for (int i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dtRef * k1[i];
            k2 = system.rhs(stage, t + 0.5 * dtRef, dtRef);
            for (int i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dtRef * k2[i];
            k3 = system.rhs(stage, t + 0.5 * dtRef, dtRef);
            for (int i = 0; i < n; ++i) stage[i] = y[i] + dtRef * k3[i];
            k4 = system.rhs(stage, t + dtRef, dtRef);
            for (int i = 0; i < n; ++i) {
                y[i] += dtRef / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                if (!std::isfinite(y[i])) {
                    throw SimulationError(SimulationAbort::NonFiniteState, stepIndex,
                                          "non-finite oracle state on step " +
                                              std::to_string(stepIndex));
                }
            }
        }
        record(r + 1);
    }
    return traj;
}

ComparisonMetrics compare_trajectories(const Trajectory& a, const Trajectory& b) {
    if (a.placeCount != b.placeCount ||
        a.placeIndex.waterCount != b.placeIndex.waterCount) {
        throw MismatchedArchitecture("trajectories have different place sets");
    }
    for (int i = 0; i < a.placeCount; ++i) {
        if (a.placeIndex.places[i].bufferId != b.placeIndex.places[i].bufferId ||
            a.placeIndex.places[i].kind != b.placeIndex.places[i].kind) {
            throw MismatchedArchitecture("trajectories have different place sets");
        }
    }
    if (b.rows() < 2) {
        throw MismatchedArchitecture("reference trajectory has fewer than two rows");
    }

    const auto concA = concentrations(a);
    const auto concB = concentrations(b);

    // Linear interpolation of series cb at time t over b's timestamps,
    // clamped to the ends.
    auto resample = [&](const std::vector<std::optional<double>>& cb,
                        double t) -> std::optional<double> {
        if (t <= b.times.front()) return cb.front();
        if (t >= b.times.back()) return cb.back();
        size_t hi = 1;
        while (b.times[hi] < t) ++hi;
        const size_t lo = hi - 1;
        if (!cb[lo].has_value() || !cb[hi].has_value()) return std::nullopt;
        const double w = (t - b.times[lo]) / (b.times[hi] - b.times[lo]);
        return *cb[lo] + w * (*cb[hi] - *cb[lo]);
    };

    ComparisonMetrics metrics;
    double sumSqAll = 0.0;
    long countAll = 0;
    for (size_t buf = 0; buf < concA.size(); ++buf) {
        BufferErrorMetrics m;
        m.bufferId = concA[buf].bufferId;
        double sumSq = 0.0;
        long count = 0;
        for (int row = 0; row < a.rows(); ++row) {
            const auto va = concA[buf].values[row];
            if (!va.has_value()) continue;
            const auto vb = resample(concB[buf].values, a.times[row]);
            if (!vb.has_value()) continue;
            const double err = std::abs(*va - *vb);
            m.linf = std::max(m.linf, err);
            sumSq += err * err;
            ++count;
        }
        m.rmse = count > 0 ? std::sqrt(sumSq / static_cast<double>(count)) : 0.0;
        sumSqAll += sumSq;
        countAll += count;
        metrics.linf = std::max(metrics.linf, m.linf);
        metrics.perBuffer.push_back(std::move(m));
    }
    metrics.rmse = countAll > 0 ? std::sqrt(sumSqAll / static_cast<double>(countAll)) : 0.0;
    return metrics;
}

}  // namespace hfgsim::reference
