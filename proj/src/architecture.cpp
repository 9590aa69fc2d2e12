#include "hfgsim/architecture.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hfgsim {

const char* to_string(BufferClass c) {
    switch (c) {
        case BufferClass::Lake: return "lake";
        case BufferClass::Land: return "land";
        case BufferClass::Point: return "point";
    }
    return "?";
}

const char* to_string(CapabilityClass c) {
    switch (c) {
        case CapabilityClass::AcceptWaterAtLake: return "accept-water-lake";
        case CapabilityClass::AcceptWaterAtLand: return "accept-water-land";
        case CapabilityClass::AcceptNitrogenAtLand: return "accept-nitrogen-land";
        case CapabilityClass::MixAtLake: return "mix-lake";
        case CapabilityClass::MixAtLand: return "mix-land";
        case CapabilityClass::MixAtPoint: return "mix-point";
        case CapabilityClass::TransportWaterOverLand: return "transport-water-land";
        case CapabilityClass::TransportNitrogenOverLand: return "transport-nitrogen-land";
        case CapabilityClass::TransportWaterByRiver: return "transport-water-river";
        case CapabilityClass::TransportNitrogenByRiver: return "transport-nitrogen-river";
    }
    return "?";
}

bool is_accept(CapabilityClass c) {
    return c == CapabilityClass::AcceptWaterAtLake ||
           c == CapabilityClass::AcceptWaterAtLand ||
           c == CapabilityClass::AcceptNitrogenAtLand;
}

bool is_mix(CapabilityClass c) {
    return c == CapabilityClass::MixAtLake || c == CapabilityClass::MixAtLand ||
           c == CapabilityClass::MixAtPoint;
}

bool is_transport(CapabilityClass c) {
    return is_water_transport(c) || is_nitrogen_transport(c);
}

bool is_water_transport(CapabilityClass c) {
    return c == CapabilityClass::TransportWaterOverLand ||
           c == CapabilityClass::TransportWaterByRiver;
}

bool is_nitrogen_transport(CapabilityClass c) {
    return c == CapabilityClass::TransportNitrogenOverLand ||
           c == CapabilityClass::TransportNitrogenByRiver;
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, const std::string& id) {
    for (const T& item : items) {
        if (item.id == id) return &item;
    }
    return nullptr;
}

}  // namespace

const Operand* InstantiatedArchitecture::find_operand(const std::string& id) const {
    return find_by_id(operands, id);
}

const Buffer* InstantiatedArchitecture::find_buffer(const std::string& id) const {
    return find_by_id(buffers, id);
}

const Capability* InstantiatedArchitecture::find_capability(const std::string& id) const {
    return find_by_id(capabilities, id);
}

const Operand* InstantiatedArchitecture::volume_operand() const {
    for (const Operand& op : operands) {
        if (op.kind == QuantityKind::Volume) return &op;
    }
    return nullptr;
}

const Operand* InstantiatedArchitecture::mass_operand() const {
    for (const Operand& op : operands) {
        if (op.kind == QuantityKind::Mass) return &op;
    }
    return nullptr;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const Violation& v : violations) {
        out << "violation[" << v.invariant << "] " << v.offenderId << ": "
            << v.message << "\n";
    }
    return out.str();
}

namespace {

bool finite(double x) { return std::isfinite(x); }

struct Checker {
    const InstantiatedArchitecture& arch;
    ValidationReport report;
    std::unordered_set<std::string> seenIds;

    void add(const std::string& offender, const std::string& invariant,
             const std::string& message) {
        report.violations.push_back({offender, invariant, message});
    }

    void check_unique(const std::string& id, const char* what) {
        if (id.empty()) {
            add(id, "empty id", std::string(what) + " with empty id");
            return;
        }
        if (!seenIds.insert(id).second) {
            add(id, "duplicate id", std::string(what) + " id declared more than once");
        }
    }

    void check_operands() {
        for (const Operand& op : arch.operands) check_unique(op.id, "operand");
        int volumes = 0;
        int masses = 0;
        for (const Operand& op : arch.operands) {
            if (op.kind == QuantityKind::Volume) ++volumes;
            if (op.kind == QuantityKind::Mass) ++masses;
        }
        if (volumes != 1 || masses != 1) {
            add("", "operand set",
                "expected exactly one volume-kind and one mass-kind operand, got " +
                    std::to_string(volumes) + " volume and " + std::to_string(masses) +
                    " mass");
        }
    }

    void check_buffers() {
        for (const Buffer& b : arch.buffers) {
            check_unique(b.id, "buffer");
            if (!finite(b.surfaceArea) || !finite(b.elevation) || !finite(b.minVolume) ||
                !finite(b.initialWaterVolume) || !finite(b.initialNitrogenMass)) {
                add(b.id, "nonfinite attribute", "buffer has a non-finite numeric field");
                continue;
            }
            if (b.surfaceArea <= 0.0)
                add(b.id, "nonpositive area", "surface area must be strictly positive");
            if (b.minVolume < 0.0)
                add(b.id, "negative min volume", "minimum volume must be nonnegative");
            if (b.initialWaterVolume < b.minVolume)
                add(b.id, "initial volume below minimum",
                    "initial water volume is below the minimum volume");
            if (b.initialNitrogenMass < 0.0)
                add(b.id, "negative nitrogen", "initial nitrogen mass must be nonnegative");
        }
    }

    // The reference architecture admits three accept combinations only.
    static bool accept_combo_legal(QuantityKind kind, BufferClass cls,
                                   CapabilityClass& derived) {
        if (kind == QuantityKind::Volume && cls == BufferClass::Lake) {
            derived = CapabilityClass::AcceptWaterAtLake;
            return true;
        }
        if (kind == QuantityKind::Volume && cls == BufferClass::Land) {
            derived = CapabilityClass::AcceptWaterAtLand;
            return true;
        }
        if (kind == QuantityKind::Mass && cls == BufferClass::Land) {
            derived = CapabilityClass::AcceptNitrogenAtLand;
            return true;
        }
        return false;
    }

    void check_accept(const Capability& c) {
        const Buffer* at = arch.find_buffer(c.atBuffer);
        if (at == nullptr) {
            add(c.id, "unresolved reference", "accept location '" + c.atBuffer + "' does not exist");
            return;
        }
        const Operand* op = arch.find_operand(c.operandId);
        if (op == nullptr) {
            add(c.id, "unresolved reference", "accept operand '" + c.operandId + "' does not exist");
            return;
        }
        CapabilityClass derived;
        if (!accept_combo_legal(op->kind, at->bufferClass, derived)) {
            add(c.id, "accept class",
                std::string("accepting this operand at a ") + to_string(at->bufferClass) +
                    " is outside the reference architecture");
        } else if (derived != c.cls) {
            add(c.id, "accept class", "capability class does not match operand and location");
        }
    }

    void check_mix(const Capability& c) {
        const Buffer* at = arch.find_buffer(c.atBuffer);
        if (at == nullptr) {
            add(c.id, "unresolved reference", "mix location '" + c.atBuffer + "' does not exist");
            return;
        }
        CapabilityClass derived = at->bufferClass == BufferClass::Lake ? CapabilityClass::MixAtLake
                                  : at->bufferClass == BufferClass::Land
                                      ? CapabilityClass::MixAtLand
                                      : CapabilityClass::MixAtPoint;
        if (derived != c.cls) {
            add(c.id, "mix class", "capability class does not match the location's buffer class");
        }
    }

    void check_transport(const Capability& c) {
        const Buffer* origin = arch.find_buffer(c.originBuffer);
        const Buffer* dest = arch.find_buffer(c.destinationBuffer);
        if (origin == nullptr) {
            add(c.id, "unresolved reference", "origin '" + c.originBuffer + "' does not exist");
        }
        if (dest == nullptr) {
            add(c.id, "unresolved reference",
                "destination '" + c.destinationBuffer + "' does not exist");
        }
        if (origin == nullptr || dest == nullptr) return;
        if (origin == dest) {
            add(c.id, "self-loop", "transport origin and destination are the same buffer");
            return;
        }
        const Operand* op = arch.find_operand(c.operandId);
        if (op == nullptr) {
            add(c.id, "unresolved reference", "transport operand '" + c.operandId + "' does not exist");
            return;
        }

        // Block discipline: land transports run Land -> Lake; river
        // transports join Lake/Point endpoints and never touch Land.
        CapabilityClass derived;
        if (origin->bufferClass == BufferClass::Land) {
            if (dest->bufferClass != BufferClass::Lake) {
                add(c.id, "endpoint class", "land runoff must discharge into a lake");
                return;
            }
            derived = op->kind == QuantityKind::Volume ? CapabilityClass::TransportWaterOverLand
                                                       : CapabilityClass::TransportNitrogenOverLand;
        } else {
            if (dest->bufferClass == BufferClass::Land) {
                add(c.id, "endpoint class", "river transport cannot discharge onto land");
                return;
            }
            derived = op->kind == QuantityKind::Volume ? CapabilityClass::TransportWaterByRiver
                                                       : CapabilityClass::TransportNitrogenByRiver;
        }
        if (derived != c.cls) {
            add(c.id, "endpoint class", "capability class does not match operand and endpoints");
            return;
        }

        if (is_water_transport(c.cls)) {
            if (!finite(c.resistance) || c.resistance <= 0.0) {
                add(c.id, "resistance", "water transport requires a strictly positive resistance");
            }
        } else {
            const Capability* water = arch.find_capability(c.pairedWaterCapability);
            if (water == nullptr) {
                add(c.id, "pairing target",
                    "paired water capability '" + c.pairedWaterCapability + "' does not exist");
                return;
            }
            if (!is_water_transport(water->cls)) {
                add(c.id, "pairing target", "paired capability '" + water->id +
                                                "' is not a water transport");
                return;
            }
            if (water->originBuffer != c.originBuffer ||
                water->destinationBuffer != c.destinationBuffer) {
                add(c.id, "mixing pair mismatch",
                    "paired water capability '" + water->id +
                        "' joins different buffers");
            }
        }
    }

    void check_capabilities() {
        for (const Capability& c : arch.capabilities) {
            check_unique(c.id, "capability");
            if (is_accept(c.cls)) {
                check_accept(c);
            } else if (is_mix(c.cls)) {
                check_mix(c);
            } else {
                check_transport(c);
            }
        }
        // Each water transport may pair with at most one nitrogen transport.
        std::unordered_map<std::string, int> pairUse;
        for (const Capability& c : arch.capabilities) {
            if (is_nitrogen_transport(c.cls) && !c.pairedWaterCapability.empty()) {
                ++pairUse[c.pairedWaterCapability];
            }
        }
        for (const Capability& c : arch.capabilities) {
            if (is_nitrogen_transport(c.cls)) {
                auto it = pairUse.find(c.pairedWaterCapability);
                if (it != pairUse.end() && it->second > 1) {
                    add(c.id, "mixing pair mismatch",
                        "water capability '" + c.pairedWaterCapability +
                            "' is paired by more than one nitrogen transport");
                }
            }
        }
    }

    void check_signals() {
        bool anyAccept = false;
        for (const Capability& c : arch.capabilities) {
            if (is_accept(c.cls)) anyAccept = true;
        }
        if (!anyAccept && !arch.signals.empty()) {
            add("", "closed system",
                "architecture has no accept capability but declares signals");
        }
        for (size_t i = 0; i < arch.signals.size(); ++i) {
            const ExogenousSignal& s = arch.signals[i];
            const std::string label = "signal #" + std::to_string(i + 1);
            const Capability* target = arch.find_capability(s.targetCapability);
            if (target == nullptr) {
                add(s.targetCapability, "signal target",
                    label + " targets a capability that does not exist");
                continue;
            }
            if (!is_accept(target->cls)) {
                add(s.targetCapability, "signal target",
                    label + " must target an accept capability");
            }
            switch (s.shape) {
                case SignalShape::Constant:
                    if (!finite(s.value)) {
                        add(s.targetCapability, "signal shape", label + " has a non-finite value");
                    } else if (s.value < 0.0) {
                        add(s.targetCapability, "signal shape",
                            label + " must be nonnegative; accepts only inject");
                    }
                    break;
                case SignalShape::Sinusoid:
                    if (!finite(s.mean) || !finite(s.amplitude) || !finite(s.period) ||
                        !finite(s.phase)) {
                        add(s.targetCapability, "signal shape",
                            label + " has a non-finite parameter");
                    } else if (s.period <= 0.0) {
                        add(s.targetCapability, "signal shape",
                            label + " requires a strictly positive period");
                    }
                    break;
                case SignalShape::Table: {
                    double previous = -std::numeric_limits<double>::infinity();
                    for (const auto& [t, v] : s.table) {
                        if (!finite(t) || !finite(v)) {
                            add(s.targetCapability, "signal shape",
                                label + " has a non-finite table entry");
                            break;
                        }
                        if (v < 0.0) {
                            add(s.targetCapability, "signal shape",
                                label + " table values must be nonnegative");
                            break;
                        }
                        if (t <= previous) {
                            add(s.targetCapability, "signal shape",
                                label + " table times must be strictly increasing");
                            break;
                        }
                        previous = t;
                    }
                    break;
                }
            }
        }
    }
};

}  // namespace

ValidationReport validate(const InstantiatedArchitecture& arch) {
    Checker checker{arch, {}, {}};
    checker.check_operands();
    checker.check_buffers();
    checker.check_capabilities();
    checker.check_signals();
    return std::move(checker.report);
}

}  // namespace hfgsim
