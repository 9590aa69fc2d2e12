#pragma once

// Domain model for the watershed reference architecture: operands (water
// volume, nitrogen mass), buffers (lakes, land segments, river points),
// the ten capability classes, and exogenous boundary signals. Everything
// here is plain data; validity is checked by validate(), which reports
// violations as values rather than throwing.

#include <string>
#include <vector>

namespace hfgsim {

enum class QuantityKind {
    Volume,  // m^3
    Mass,    // kg
};

struct Operand {
    std::string id;
    std::string name;
    QuantityKind kind = QuantityKind::Volume;
};

enum class BufferClass {
    Lake,
    Land,
    Point,
};

const char* to_string(BufferClass c);

/// A storage location for both operands. Points are full storage buffers:
/// they carry surface area and a minimum volume just like lakes.
struct Buffer {
    std::string id;
    std::string name;
    BufferClass bufferClass = BufferClass::Lake;
    double surfaceArea = 0.0;          // m^2, > 0
    double elevation = 0.0;            // m
    double minVolume = 0.0;            // m^3, >= 0; flow threshold volume
    double initialWaterVolume = 0.0;   // m^3, >= minVolume
    double initialNitrogenMass = 0.0;  // kg, >= 0
};

/// The ten capability classes, in the canonical block order of the
/// firing vector U. The enum order defines the column-block order of the
/// incidence matrices and must not be rearranged.
enum class CapabilityClass {
    AcceptWaterAtLake,
    AcceptWaterAtLand,
    AcceptNitrogenAtLand,
    MixAtLake,
    MixAtLand,
    MixAtPoint,
    TransportWaterOverLand,
    TransportNitrogenOverLand,
    TransportWaterByRiver,
    TransportNitrogenByRiver,
};

constexpr int kCapabilityClassCount = 10;

const char* to_string(CapabilityClass c);
bool is_accept(CapabilityClass c);
bool is_mix(CapabilityClass c);
bool is_transport(CapabilityClass c);
bool is_water_transport(CapabilityClass c);
bool is_nitrogen_transport(CapabilityClass c);

struct Capability {
    std::string id;
    CapabilityClass cls = CapabilityClass::MixAtLake;
    std::string subject;      // resource performing the process
    std::string operandId;    // operand accepted/moved; empty for mixes (both)
    std::string atBuffer;     // accept/mix location
    std::string originBuffer;       // transports only
    std::string destinationBuffer;  // transports only
    double resistance = 0.0;        // Pa*s/m^3, water transports only, > 0
    std::string pairedWaterCapability;  // nitrogen transports only
};

enum class SignalShape {
    Constant,
    Sinusoid,
    Table,
};

/// Boundary input pinned to an Accept capability. Rates carry the unit of
/// the target (m^3/s for water accepts, kg/s for nitrogen accepts).
struct ExogenousSignal {
    std::string targetCapability;
    SignalShape shape = SignalShape::Constant;
    double value = 0.0;      // constant
    double mean = 0.0;       // sinusoid
    double amplitude = 0.0;  // sinusoid
    double period = 0.0;     // sinusoid, s, > 0
    double phase = 0.0;      // sinusoid, s
    std::vector<std::pair<double, double>> table;  // (time s, value), times strictly increasing
};

/// A fully resolved watershed instance. Declaration order of buffers and
/// capabilities is meaningful: it fixes the within-block ordering of the
/// place and capability indices. Immutable after construction by convention;
/// safe to share read-only across threads.
struct InstantiatedArchitecture {
    std::vector<Operand> operands;
    std::vector<Buffer> buffers;
    std::vector<Capability> capabilities;
    std::vector<ExogenousSignal> signals;

    const Operand* find_operand(const std::string& id) const;
    const Buffer* find_buffer(const std::string& id) const;
    const Capability* find_capability(const std::string& id) const;

    /// The volume-kind operand (water), or nullptr if absent.
    const Operand* volume_operand() const;
    /// The mass-kind operand (nitrogen), or nullptr if absent.
    const Operand* mass_operand() const;
};

struct Violation {
    std::string offenderId;
    std::string invariant;  // short stable slug, e.g. "self-loop"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks every architecture invariant and returns the violations found.
/// Pure and deterministic: the same input yields a byte-identical report.
/// An empty report guarantees tensor construction and simulation will not
/// hit an unresolved id at runtime.
ValidationReport validate(const InstantiatedArchitecture& arch);

}  // namespace hfgsim
