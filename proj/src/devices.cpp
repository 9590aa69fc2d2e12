#include "hfgsim/devices.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hfgsim {

HeadParameters HeadParameters::build(const InstantiatedArchitecture& arch,
                                     const PlaceIndex& placeIndex) {
    HeadParameters params;
    params.area.reserve(placeIndex.waterCount);
    params.elevation.reserve(placeIndex.waterCount);
    params.minVolume.reserve(placeIndex.waterCount);
    for (int i = 0; i < placeIndex.waterCount; ++i) {
        const Buffer& b = arch.buffers[placeIndex.places[i].bufferPos];
        params.area.push_back(b.surfaceArea);
        params.elevation.push_back(b.elevation);
        params.minVolume.push_back(b.minVolume);
    }
    return params;
}

std::vector<double> hydraulic_head(std::span<const double> waterVolumes,
                                   const HeadParameters& params) {
    std::vector<double> head(waterVolumes.size());
    for (size_t i = 0; i < waterVolumes.size(); ++i) {
        head[i] = (waterVolumes[i] - params.minVolume[i]) / params.area[i] +
                  params.elevation[i];
    }
    return head;
}

WaterTransportSlice WaterTransportSlice::build(const IncidenceTensors& tensors,
                                               const CapabilityIndex& capabilityIndex,
                                               const InstantiatedArchitecture& arch) {
    WaterTransportSlice slice;
    const int waterCount = tensors.placeBlocks[3];
    for (int col = 0; col < capabilityIndex.size(); ++col) {
        if (!is_water_transport(capabilityIndex.classes[col])) continue;
        Column c;
        c.column = col;
        c.capabilityId = capabilityIndex.ids[col];
        c.resistance = arch.capabilities[capabilityIndex.archPositions[col]].resistance;
        c.originRow = -1;
        c.destRow = -1;
        // Read the endpoints off the net matrix column, water rows only.
        for (const SparseMatrix::Triplet& t : tensors.net.entries) {
            if (t.col != col || t.row >= waterCount) continue;
            if (t.value < 0.0) c.originRow = t.row;
            if (t.value > 0.0) c.destRow = t.row;
        }
        if (c.originRow < 0 || c.destRow < 0) {
            throw std::logic_error("water transport column lacks an origin/destination pair");
        }
        slice.columns.push_back(std::move(c));
    }
    return slice;
}

std::vector<double> water_transport_rates(std::span<const double> head,
                                          const WaterTransportSlice& slice,
                                          const PhysicalConstants& constants) {
    const double rhoG = constants.rho * constants.g;
    std::vector<double> rates(slice.columns.size());
    for (size_t i = 0; i < slice.columns.size(); ++i) {
        const auto& c = slice.columns[i];
        rates[i] = rhoG / c.resistance * (head[c.originRow] - head[c.destRow]);
    }
    return rates;
}

ClampedRates clamp_withdrawals(std::vector<double> rates,
                               std::span<const double> waterVolumes,
                               const HeadParameters& params,
                               const WaterTransportSlice& slice, double dt) {
    ClampedRates result;
    const size_t waterCount = waterVolumes.size();

    // A signed rate withdraws from exactly one place: the origin when
    // positive, the destination when negative (backflow).
    std::vector<double> withdrawal(waterCount, 0.0);
    for (size_t i = 0; i < slice.columns.size(); ++i) {
        const auto& c = slice.columns[i];
        if (rates[i] > 0.0) {
            withdrawal[c.originRow] += rates[i];
        } else if (rates[i] < 0.0) {
            withdrawal[c.destRow] -= rates[i];
        }
    }

    std::vector<double> factor(waterCount, 1.0);
    for (size_t p = 0; p < waterCount; ++p) {
        if (withdrawal[p] <= 0.0) continue;
        const double available = waterVolumes[p] - params.minVolume[p];
        const double demanded = withdrawal[p] * dt;
        if (demanded <= available) continue;
        factor[p] = available > 0.0 ? available / demanded : 0.0;
        result.warnings.push_back({static_cast<int>(p), factor[p]});
    }

    for (size_t i = 0; i < slice.columns.size(); ++i) {
        const auto& c = slice.columns[i];
        if (rates[i] > 0.0) {
            rates[i] *= factor[c.originRow];
        } else if (rates[i] < 0.0) {
            rates[i] *= factor[c.destRow];
        }
    }
    result.rates = std::move(rates);
    return result;
}

NitrogenPairingSlice NitrogenPairingSlice::build(const InstantiatedArchitecture& arch,
                                                 const PlaceIndex& placeIndex,
                                                 const CapabilityIndex& capabilityIndex,
                                                 const WaterTransportSlice& waterSlice) {
    NitrogenPairingSlice pairing;
    for (int col = 0; col < capabilityIndex.size(); ++col) {
        if (!is_nitrogen_transport(capabilityIndex.classes[col])) continue;
        const Capability& c = arch.capabilities[capabilityIndex.archPositions[col]];
        Pair p;
        p.column = col;
        p.waterColumnPos = -1;
        const int waterColumn = capabilityIndex.index_of(c.pairedWaterCapability);
        for (size_t i = 0; i < waterSlice.columns.size(); ++i) {
            if (waterSlice.columns[i].column == waterColumn) {
                p.waterColumnPos = static_cast<int>(i);
                break;
            }
        }
        if (p.waterColumnPos < 0) {
            throw std::logic_error("nitrogen transport '" + c.id +
                                   "' has no paired water transport column");
        }
        p.originWaterRow = placeIndex.water_index_of(c.originBuffer);
        p.originNitrogenRow = placeIndex.nitrogen_index_of(c.originBuffer);
        pairing.pairs.push_back(p);
    }
    return pairing;
}

std::vector<double> nitrogen_transport_rates(std::span<const double> marking,
                                             std::span<const double> waterRates,
                                             const NitrogenPairingSlice& pairing) {
    std::vector<double> rates(pairing.pairs.size());
    for (size_t i = 0; i < pairing.pairs.size(); ++i) {
        const auto& p = pairing.pairs[i];
        const double volume = marking[p.originWaterRow];
        if (volume <= kVolumeGuard) {
            rates[i] = 0.0;
            continue;
        }
        rates[i] = marking[p.originNitrogenRow] * waterRates[p.waterColumnPos] / volume;
    }
    return rates;
}

CompiledSignals CompiledSignals::build(const InstantiatedArchitecture& arch,
                                       const CapabilityIndex& capabilityIndex) {
    CompiledSignals compiled;
    for (const ExogenousSignal& s : arch.signals) {
        const int column = capabilityIndex.index_of(s.targetCapability);
        if (column < 0) {
            throw std::logic_error("signal targets unknown capability '" +
                                   s.targetCapability + "'");
        }
        compiled.entries.push_back({column, s});
    }
    return compiled;
}

double signal_value(const ExogenousSignal& signal, double t) {
    switch (signal.shape) {
        case SignalShape::Constant:
            return signal.value;
        case SignalShape::Sinusoid: {
            const double arg = 2.0 * std::numbers::pi * (t - signal.phase) / signal.period;
            const double v = signal.mean + signal.amplitude * std::sin(arg);
            return v > 0.0 ? v : 0.0;  // negative precipitation is nonphysical
        }
        case SignalShape::Table: {
            double value = 0.0;  // zero before the first knot
            for (const auto& [time, v] : signal.table) {
                if (time > t) break;
                value = v;
            }
            return value;
        }
    }
    return 0.0;
}

void add_exogenous_rates(double t, const CompiledSignals& signals,
                         std::span<double> firing) {
    for (const auto& entry : signals.entries) {
        firing[entry.column] += signal_value(entry.signal, t);
    }
}

}  // namespace hfgsim
