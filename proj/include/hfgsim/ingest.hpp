#pragma once

// XML scenario ingest. The schema is small and fixed:
//
//   <scenario name=".." description="..">
//     <config dt=".." horizon=".." rho=".." g=".." stride=".."/>
//     <operands>
//       <operand id=".." kind="volume|mass" name=".."/>
//     </operands>
//     <buffers>
//       <lake|land|point id=".." area=".." elev=".." vmin=".." v0=".." m0=".." name=".."/>
//     </buffers>
//     <capabilities>
//       <accept id=".." at=".." operand=".."/>
//       <mix id=".." at=".."/>
//       <transport id=".." via=".." from=".." to=".." resistance=".." pairedWith=".."/>
//     </capabilities>
//     <signals>
//       <constant target=".." value=".."/>
//       <sinusoid target=".." mean=".." amplitude=".." period=".." phase=".."/>
//       <table target=".."> <p t=".." v=".."/> ... </table>
//     </signals>
//   </scenario>
//
// Units are SI throughout (m, m^2, m^3, kg, s, Pa*s/m^3). Defaults:
// rho = 1000, g = 9.81, stride = 1, vmin = 0, phase = 0, name = id.
// Attribute numbers accept decimal or scientific notation.

#include <string>

#include "hfgsim/architecture.hpp"
#include "hfgsim/config.hpp"
#include "hfgsim/errors.hpp"

namespace hfgsim::ingest {

struct ScenarioDocument {
    InstantiatedArchitecture architecture;
    SimulationConfig config;
    std::string name;
    std::string description;
};

/// Parses an XML scenario. Throws ScenarioError with line/column on
/// malformed XML, schema violations, dangling references, and out-of-domain
/// numbers; never returns a partially constructed document.
ScenarioDocument parse_scenario(const std::string& text);

/// Serializes a document back to the schema above. Numbers round-trip
/// exactly: parse_scenario(emit_scenario(d)) is semantically equal to d.
std::string emit_scenario(const ScenarioDocument& doc);

}  // namespace hfgsim::ingest
