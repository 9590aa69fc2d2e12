#pragma once

#include <stdexcept>
#include <string>

namespace hfgsim {

enum class ScenarioErrorKind {
    MalformedXml,       // document is not well-formed
    SchemaViolation,    // unknown element/attribute or missing required field
    DanglingReference,  // an id reference does not resolve
    DomainViolation,    // nonpositive area, negative resistance, nonfinite number
};

inline const char* to_string(ScenarioErrorKind k) {
    switch (k) {
        case ScenarioErrorKind::MalformedXml: return "malformed xml";
        case ScenarioErrorKind::SchemaViolation: return "schema violation";
        case ScenarioErrorKind::DanglingReference: return "dangling reference";
        case ScenarioErrorKind::DomainViolation: return "domain violation";
    }
    return "?";
}

/// Raised by scenario parsing. Carries the 1-based line/column of the
/// offending construct when the parser can attribute one (0 otherwise).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(ScenarioErrorKind kind, const std::string& message, int line = 0,
                  int column = 0)
        : std::runtime_error(std::string(to_string(kind)) + " at line " +
                             std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + message),
          kind_(kind),
          line_(line),
          column_(column) {}

    ScenarioErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    ScenarioErrorKind kind_;
    int line_;
    int column_;
};

enum class SimulationAbort {
    NonFiniteState,    // a marking entry became NaN or infinite
    NegativeNitrogen,  // a nitrogen place fell below the underflow tolerance
};

/// Raised when a simulation must stop; carries the step index at which
/// the state went bad.
class SimulationError : public std::runtime_error {
public:
    SimulationError(SimulationAbort reason, long step, const std::string& message)
        : std::runtime_error(message), reason_(reason), step_(step) {}

    SimulationAbort reason() const { return reason_; }
    long step() const { return step_; }

private:
    SimulationAbort reason_;
    long step_;
};

/// Trajectory comparison requested across differing place sets.
class MismatchedArchitecture : public std::runtime_error {
public:
    explicit MismatchedArchitecture(const std::string& message)
        : std::runtime_error(message) {}
};

/// Stability bound requested for an architecture with no water-transport
/// capability (the bound would be +infinity).
class NoTransportEdges : public std::runtime_error {
public:
    NoTransportEdges()
        : std::runtime_error("architecture has no water-transport capability") {}
};

}  // namespace hfgsim
