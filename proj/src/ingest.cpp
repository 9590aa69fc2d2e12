#include "hfgsim/ingest.hpp"

#include <expat.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace hfgsim::ingest {

namespace {

using AttrMap = std::map<std::string, std::string>;

struct Located {
    int line = 0;
    int column = 0;
};

[[noreturn]] void fail(ScenarioErrorKind kind, const std::string& message,
                       const Located& at) {
    throw ScenarioError(kind, message, at.line, at.column);
}

// ---------------------------------------------------------------------------
// Raw document, attribute-faithful, resolved into the domain model afterwards.
// ---------------------------------------------------------------------------

struct RawConfig {
    AttrMap attrs;
    Located loc;
};

struct RawOperand {
    AttrMap attrs;
    Located loc;
};

struct RawBuffer {
    std::string element;  // lake | land | point
    AttrMap attrs;
    Located loc;
};

struct RawCapability {
    std::string element;  // accept | mix | transport
    AttrMap attrs;
    Located loc;
};

struct RawSignal {
    std::string element;  // constant | sinusoid | table
    AttrMap attrs;
    std::vector<std::pair<AttrMap, Located>> points;  // table rows
    Located loc;
};

struct RawDocument {
    AttrMap scenarioAttrs;
    Located scenarioLoc;
    std::optional<RawConfig> config;
    std::vector<RawOperand> operands;
    std::vector<RawBuffer> buffers;
    std::vector<RawCapability> capabilities;
    std::vector<RawSignal> signals;
};

// ---------------------------------------------------------------------------
// Expat shell. Errors are stashed and re-thrown after XML_Parse returns,
// since exceptions must not unwind through the C callback frames.
// ---------------------------------------------------------------------------

struct ParseShell {
    XML_Parser parser = nullptr;
    RawDocument doc;
    std::vector<std::string> stack;
    std::optional<ScenarioError> error;
    bool sawRoot = false;

    Located here() const {
        return {static_cast<int>(XML_GetCurrentLineNumber(parser)),
                static_cast<int>(XML_GetCurrentColumnNumber(parser)) + 1};
    }

    void stash(ScenarioErrorKind kind, const std::string& message) {
        if (!error.has_value()) {
            const Located at = here();
            error.emplace(kind, message, at.line, at.column);
            XML_StopParser(parser, XML_FALSE);
        }
    }

    void start(const char* name, const char** atts) {
        const std::string parent = stack.empty() ? "" : stack.back();
        stack.emplace_back(name);

        AttrMap attrs;
        for (int i = 0; atts[i] != nullptr; i += 2) {
            attrs[atts[i]] = atts[i + 1];
        }
        const std::string element = name;

        if (parent.empty()) {
            if (element != "scenario") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "root element must be <scenario>, got <" + element + ">");
                return;
            }
            doc.scenarioAttrs = std::move(attrs);
            doc.scenarioLoc = here();
            sawRoot = true;
        } else if (parent == "scenario") {
            if (element == "config") {
                if (doc.config.has_value()) {
                    stash(ScenarioErrorKind::SchemaViolation,
                          "more than one <config> element");
                    return;
                }
                doc.config = RawConfig{std::move(attrs), here()};
            } else if (element == "operands" || element == "buffers" ||
                       element == "capabilities" || element == "signals") {
                if (!attrs.empty()) {
                    stash(ScenarioErrorKind::SchemaViolation,
                          "<" + element + "> takes no attributes");
                }
            } else {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <scenario>");
            }
        } else if (parent == "operands") {
            if (element != "operand") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <operands>");
                return;
            }
            doc.operands.push_back({std::move(attrs), here()});
        } else if (parent == "buffers") {
            if (element != "lake" && element != "land" && element != "point") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <buffers>");
                return;
            }
            doc.buffers.push_back({element, std::move(attrs), here()});
        } else if (parent == "capabilities") {
            if (element != "accept" && element != "mix" && element != "transport") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <capabilities>");
                return;
            }
            doc.capabilities.push_back({element, std::move(attrs), here()});
        } else if (parent == "signals") {
            if (element != "constant" && element != "sinusoid" && element != "table") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <signals>");
                return;
            }
            doc.signals.push_back({element, std::move(attrs), {}, here()});
        } else if (parent == "table") {
            if (element != "p") {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unknown element <" + element + "> under <table>");
                return;
            }
            doc.signals.back().points.emplace_back(std::move(attrs), here());
        } else {
            stash(ScenarioErrorKind::SchemaViolation,
                  "unknown element <" + element + "> under <" + parent + ">");
        }
    }

    void end(const char*) {
        if (!stack.empty()) stack.pop_back();
    }

    void text(const char* data, int len) {
        for (int i = 0; i < len; ++i) {
            if (!std::isspace(static_cast<unsigned char>(data[i]))) {
                stash(ScenarioErrorKind::SchemaViolation,
                      "unexpected text content; the schema is attribute-only");
                return;
            }
        }
    }
};

void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
    static_cast<ParseShell*>(user)->start(name, atts);
}
void on_end(void* user, const XML_Char* name) {
    static_cast<ParseShell*>(user)->end(name);
}
void on_text(void* user, const XML_Char* data, int len) {
    static_cast<ParseShell*>(user)->text(data, len);
}

RawDocument parse_raw(const std::string& text) {
    XML_Parser parser = XML_ParserCreate(nullptr);
    if (parser == nullptr) throw std::bad_alloc();

    ParseShell shell;
    shell.parser = parser;
    XML_SetUserData(parser, &shell);
    XML_SetElementHandler(parser, on_start, on_end);
    XML_SetCharacterDataHandler(parser, on_text);

    const XML_Status status = XML_Parse(parser, text.data(),
                                        static_cast<int>(text.size()), /*isFinal=*/1);
    std::optional<ScenarioError> malformed;
    if (status != XML_STATUS_OK || !shell.sawRoot) {
        const char* message = XML_ErrorString(XML_GetErrorCode(parser));
        malformed.emplace(ScenarioErrorKind::MalformedXml,
                          message != nullptr ? message : "no document element",
                          static_cast<int>(XML_GetErrorLineNumber(parser)),
                          static_cast<int>(XML_GetErrorColumnNumber(parser)) + 1);
    }
    XML_ParserFree(parser);

    if (shell.error.has_value()) throw *shell.error;
    if (malformed.has_value()) throw *malformed;
    return std::move(shell.doc);
}

// ---------------------------------------------------------------------------
// Attribute access and number parsing
// ---------------------------------------------------------------------------

class Fields {
public:
    Fields(const AttrMap& attrs, const Located& loc, std::string context)
        : attrs_(attrs), loc_(loc), context_(std::move(context)) {}

    std::string require(const std::string& key) const {
        auto it = attrs_.find(key);
        if (it == attrs_.end()) {
            fail(ScenarioErrorKind::SchemaViolation,
                 context_ + " is missing required attribute '" + key + "'", loc_);
        }
        used_.push_back(key);
        return it->second;
    }

    std::string optional(const std::string& key, const std::string& fallback) const {
        used_.push_back(key);
        auto it = attrs_.find(key);
        return it == attrs_.end() ? fallback : it->second;
    }

    bool has(const std::string& key) const { return attrs_.count(key) > 0; }

    double number(const std::string& key) const { return to_number(require(key), key); }

    double number_or(const std::string& key, double fallback) const {
        used_.push_back(key);
        auto it = attrs_.find(key);
        return it == attrs_.end() ? fallback : to_number(it->second, key);
    }

    /// Flags attributes outside the schema.
    void finish() const {
        for (const auto& [key, value] : attrs_) {
            bool known = false;
            for (const std::string& u : used_) {
                if (u == key) known = true;
            }
            if (!known) {
                fail(ScenarioErrorKind::SchemaViolation,
                     context_ + " has unknown attribute '" + key + "'", loc_);
            }
        }
    }

    const Located& loc() const { return loc_; }
    const std::string& context() const { return context_; }

private:
    double to_number(const std::string& raw, const std::string& key) const {
        const char* begin = raw.c_str();
        char* endPtr = nullptr;
        const double value = std::strtod(begin, &endPtr);
        if (endPtr == begin || endPtr != begin + raw.size()) {
            fail(ScenarioErrorKind::SchemaViolation,
                 context_ + " attribute '" + key + "' is not a number: '" + raw + "'",
                 loc_);
        }
        if (!std::isfinite(value)) {
            fail(ScenarioErrorKind::DomainViolation,
                 context_ + " attribute '" + key + "' must be finite", loc_);
        }
        return value;
    }

    const AttrMap& attrs_;
    Located loc_;
    std::string context_;
    mutable std::vector<std::string> used_;
};

long to_count(double value, const Fields& f, const std::string& key) {
    if (value < 1.0 || value != std::floor(value) || value > 1e15) {
        fail(ScenarioErrorKind::DomainViolation,
             f.context() + " attribute '" + key + "' must be a positive integer",
             f.loc());
    }
    return static_cast<long>(value);
}

// ---------------------------------------------------------------------------
// Resolution into the domain model
// ---------------------------------------------------------------------------

SimulationConfig resolve_config(const RawDocument& raw) {
    if (!raw.config.has_value()) {
        fail(ScenarioErrorKind::SchemaViolation, "<scenario> is missing <config>",
             raw.scenarioLoc);
    }
    Fields f(raw.config->attrs, raw.config->loc, "<config>");
    SimulationConfig config;
    config.dt = f.number("dt");
    config.horizonSteps = to_count(f.number("horizon"), f, "horizon");
    config.stride = to_count(f.number_or("stride", 1.0), f, "stride");
    config.constants.rho = f.number_or("rho", 1000.0);
    config.constants.g = f.number_or("g", 9.81);
    f.finish();

    if (!(config.dt > 0.0)) {
        fail(ScenarioErrorKind::DomainViolation, "<config> dt must be positive", f.loc());
    }
    if (config.constants.rho <= 0.0 || config.constants.g <= 0.0) {
        fail(ScenarioErrorKind::DomainViolation, "<config> rho and g must be positive",
             f.loc());
    }
    if (config.horizonSteps % config.stride != 0) {
        fail(ScenarioErrorKind::DomainViolation,
             "<config> stride must divide the horizon", f.loc());
    }
    return config;
}

std::vector<Operand> resolve_operands(const RawDocument& raw) {
    std::vector<Operand> operands;
    for (const RawOperand& r : raw.operands) {
        Fields f(r.attrs, r.loc, "<operand>");
        Operand op;
        op.id = f.require("id");
        const std::string kind = f.require("kind");
        op.name = f.optional("name", op.id);
        f.finish();
        if (kind == "volume") {
            op.kind = QuantityKind::Volume;
        } else if (kind == "mass") {
            op.kind = QuantityKind::Mass;
        } else {
            fail(ScenarioErrorKind::SchemaViolation,
                 "<operand> kind must be 'volume' or 'mass', got '" + kind + "'", r.loc);
        }
        operands.push_back(std::move(op));
    }
    return operands;
}

std::vector<Buffer> resolve_buffers(const RawDocument& raw) {
    std::vector<Buffer> buffers;
    for (const RawBuffer& r : raw.buffers) {
        Fields preview(r.attrs, r.loc, "<" + r.element + ">");
        const std::string id = preview.optional("id", "");
        const std::string context =
            "<" + r.element + (id.empty() ? ">" : "> '" + id + "'");

        Fields f(r.attrs, r.loc, context);
        Buffer b;
        b.id = f.require("id");
        b.name = f.optional("name", b.id);
        b.bufferClass = r.element == "lake"   ? BufferClass::Lake
                        : r.element == "land" ? BufferClass::Land
                                              : BufferClass::Point;
        b.surfaceArea = f.number("area");
        b.elevation = f.number("elev");
        b.minVolume = f.number_or("vmin", 0.0);
        b.initialWaterVolume = f.number("v0");
        b.initialNitrogenMass = f.number("m0");
        f.finish();

        if (b.surfaceArea <= 0.0) {
            fail(ScenarioErrorKind::DomainViolation,
                 context + " area must be strictly positive", r.loc);
        }
        buffers.push_back(std::move(b));
    }
    return buffers;
}

std::vector<Capability> resolve_capabilities(const RawDocument& raw,
                                             const InstantiatedArchitecture& arch) {
    std::vector<Capability> capabilities;
    for (const RawCapability& r : raw.capabilities) {
        Fields preview(r.attrs, r.loc, "<" + r.element + ">");
        const std::string id = preview.optional("id", "");
        const std::string context =
            "<" + r.element + (id.empty() ? ">" : "> '" + id + "'");
        Fields f(r.attrs, r.loc, context);

        Capability c;
        c.id = f.require("id");

        if (r.element == "accept") {
            c.atBuffer = f.require("at");
            c.operandId = f.require("operand");
            c.subject = c.atBuffer;
            f.finish();
            const Buffer* at = arch.find_buffer(c.atBuffer);
            if (at == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown buffer '" + c.atBuffer + "'", r.loc);
            }
            const Operand* op = arch.find_operand(c.operandId);
            if (op == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown operand '" + c.operandId + "'",
                     r.loc);
            }
            if (op->kind == QuantityKind::Volume && at->bufferClass == BufferClass::Lake) {
                c.cls = CapabilityClass::AcceptWaterAtLake;
            } else if (op->kind == QuantityKind::Volume &&
                       at->bufferClass == BufferClass::Land) {
                c.cls = CapabilityClass::AcceptWaterAtLand;
            } else if (op->kind == QuantityKind::Mass &&
                       at->bufferClass == BufferClass::Land) {
                c.cls = CapabilityClass::AcceptNitrogenAtLand;
            } else {
                fail(ScenarioErrorKind::SchemaViolation,
                     context + ": the reference architecture has no class for accepting "
                               "this operand at a " +
                         std::string(to_string(at->bufferClass)),
                     r.loc);
            }
        } else if (r.element == "mix") {
            c.atBuffer = f.require("at");
            c.subject = c.atBuffer;
            f.finish();
            const Buffer* at = arch.find_buffer(c.atBuffer);
            if (at == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown buffer '" + c.atBuffer + "'", r.loc);
            }
            c.cls = at->bufferClass == BufferClass::Lake   ? CapabilityClass::MixAtLake
                    : at->bufferClass == BufferClass::Land ? CapabilityClass::MixAtLand
                                                           : CapabilityClass::MixAtPoint;
        } else {
            c.operandId = f.require("via");
            c.originBuffer = f.require("from");
            c.destinationBuffer = f.require("to");
            c.subject = c.id;  // the transporting segment itself
            const Operand* op = arch.find_operand(c.operandId);
            if (op == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown operand '" + c.operandId + "'",
                     r.loc);
            }
            const Buffer* origin = arch.find_buffer(c.originBuffer);
            if (origin == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown buffer '" + c.originBuffer + "'",
                     r.loc);
            }
            if (arch.find_buffer(c.destinationBuffer) == nullptr) {
                fail(ScenarioErrorKind::DanglingReference,
                     context + " references unknown buffer '" + c.destinationBuffer + "'",
                     r.loc);
            }

            const bool fromLand = origin->bufferClass == BufferClass::Land;
            if (op->kind == QuantityKind::Volume) {
                c.cls = fromLand ? CapabilityClass::TransportWaterOverLand
                                 : CapabilityClass::TransportWaterByRiver;
                c.resistance = f.number("resistance");
                if (c.resistance <= 0.0) {
                    fail(ScenarioErrorKind::DomainViolation,
                         context + " resistance must be strictly positive", r.loc);
                }
                if (f.has("pairedWith")) {
                    fail(ScenarioErrorKind::SchemaViolation,
                         context + ": pairedWith applies to nitrogen transports only",
                         r.loc);
                }
            } else {
                c.cls = fromLand ? CapabilityClass::TransportNitrogenOverLand
                                 : CapabilityClass::TransportNitrogenByRiver;
                c.pairedWaterCapability = f.require("pairedWith");
                if (f.has("resistance")) {
                    fail(ScenarioErrorKind::SchemaViolation,
                         context + ": resistance applies to water transports only", r.loc);
                }
            }
            f.finish();
        }
        capabilities.push_back(std::move(c));
    }

    // pairedWith targets live in the same list; resolve once it is complete.
    for (size_t i = 0; i < capabilities.size(); ++i) {
        const Capability& c = capabilities[i];
        if (!is_nitrogen_transport(c.cls)) continue;
        bool found = false;
        for (const Capability& other : capabilities) {
            if (other.id == c.pairedWaterCapability) found = true;
        }
        if (!found) {
            fail(ScenarioErrorKind::DanglingReference,
                 "<transport> '" + c.id + "' references unknown capability '" +
                     c.pairedWaterCapability + "'",
                 raw.capabilities[i].loc);
        }
    }
    return capabilities;
}

std::vector<ExogenousSignal> resolve_signals(const RawDocument& raw,
                                             const InstantiatedArchitecture& arch) {
    std::vector<ExogenousSignal> signals;
    for (const RawSignal& r : raw.signals) {
        Fields f(r.attrs, r.loc, "<" + r.element + ">");
        ExogenousSignal s;
        s.targetCapability = f.require("target");
        if (arch.find_capability(s.targetCapability) == nullptr) {
            fail(ScenarioErrorKind::DanglingReference,
                 "<" + r.element + "> references unknown capability '" +
                     s.targetCapability + "'",
                 r.loc);
        }
        if (r.element == "constant") {
            s.shape = SignalShape::Constant;
            s.value = f.number("value");
        } else if (r.element == "sinusoid") {
            s.shape = SignalShape::Sinusoid;
            s.mean = f.number("mean");
            s.amplitude = f.number("amplitude");
            s.period = f.number("period");
            s.phase = f.number_or("phase", 0.0);
            if (s.period <= 0.0) {
                fail(ScenarioErrorKind::DomainViolation,
                     "<sinusoid> period must be strictly positive", r.loc);
            }
        } else {
            s.shape = SignalShape::Table;
            for (const auto& [attrs, loc] : r.points) {
                Fields pf(attrs, loc, "<p>");
                const double t = pf.number("t");
                const double v = pf.number("v");
                pf.finish();
                if (!s.table.empty() && t <= s.table.back().first) {
                    fail(ScenarioErrorKind::DomainViolation,
                         "<table> times must be strictly increasing", loc);
                }
                s.table.emplace_back(t, v);
            }
        }
        f.finish();
        signals.push_back(std::move(s));
    }
    return signals;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string xml_escape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char ch : raw) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void attr(std::ostringstream& out, const char* key, const std::string& value) {
    out << ' ' << key << "=\"" << xml_escape(value) << '"';
}

void attr(std::ostringstream& out, const char* key, double value) {
    out << ' ' << key << "=\"" << fmt(value) << '"';
}

}  // namespace

ScenarioDocument parse_scenario(const std::string& text) {
    const RawDocument raw = parse_raw(text);

    ScenarioDocument doc;
    {
        Fields f(raw.scenarioAttrs, raw.scenarioLoc, "<scenario>");
        doc.name = f.optional("name", "");
        doc.description = f.optional("description", "");
        f.finish();
    }
    doc.config = resolve_config(raw);
    doc.architecture.operands = resolve_operands(raw);
    doc.architecture.buffers = resolve_buffers(raw);
    doc.architecture.capabilities = resolve_capabilities(raw, doc.architecture);
    doc.architecture.signals = resolve_signals(raw, doc.architecture);
    return doc;
}

std::string emit_scenario(const ScenarioDocument& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<scenario";
    if (!doc.name.empty()) attr(out, "name", doc.name);
    if (!doc.description.empty()) attr(out, "description", doc.description);
    out << ">\n";

    out << "  <config";
    attr(out, "dt", doc.config.dt);
    out << " horizon=\"" << doc.config.horizonSteps << '"';
    if (doc.config.stride != 1) out << " stride=\"" << doc.config.stride << '"';
    attr(out, "rho", doc.config.constants.rho);
    attr(out, "g", doc.config.constants.g);
    out << "/>\n";

    out << "  <operands>\n";
    for (const Operand& op : doc.architecture.operands) {
        out << "    <operand";
        attr(out, "id", op.id);
        attr(out, "kind", op.kind == QuantityKind::Volume ? "volume" : "mass");
        if (op.name != op.id) attr(out, "name", op.name);
        out << "/>\n";
    }
    out << "  </operands>\n";

    out << "  <buffers>\n";
    for (const Buffer& b : doc.architecture.buffers) {
        out << "    <" << to_string(b.bufferClass);
        attr(out, "id", b.id);
        if (b.name != b.id) attr(out, "name", b.name);
        attr(out, "area", b.surfaceArea);
        attr(out, "elev", b.elevation);
        attr(out, "vmin", b.minVolume);
        attr(out, "v0", b.initialWaterVolume);
        attr(out, "m0", b.initialNitrogenMass);
        out << "/>\n";
    }
    out << "  </buffers>\n";

    out << "  <capabilities>\n";
    for (const Capability& c : doc.architecture.capabilities) {
        if (is_accept(c.cls)) {
            out << "    <accept";
            attr(out, "id", c.id);
            attr(out, "at", c.atBuffer);
            attr(out, "operand", c.operandId);
        } else if (is_mix(c.cls)) {
            out << "    <mix";
            attr(out, "id", c.id);
            attr(out, "at", c.atBuffer);
        } else {
            out << "    <transport";
            attr(out, "id", c.id);
            attr(out, "via", c.operandId);
            attr(out, "from", c.originBuffer);
            attr(out, "to", c.destinationBuffer);
            if (is_water_transport(c.cls)) {
                attr(out, "resistance", c.resistance);
            } else {
                attr(out, "pairedWith", c.pairedWaterCapability);
            }
        }
        out << "/>\n";
    }
    out << "  </capabilities>\n";

    out << "  <signals>\n";
    for (const ExogenousSignal& s : doc.architecture.signals) {
        switch (s.shape) {
            case SignalShape::Constant:
                out << "    <constant";
                attr(out, "target", s.targetCapability);
                attr(out, "value", s.value);
                out << "/>\n";
                break;
            case SignalShape::Sinusoid:
                out << "    <sinusoid";
                attr(out, "target", s.targetCapability);
                attr(out, "mean", s.mean);
                attr(out, "amplitude", s.amplitude);
                attr(out, "period", s.period);
                attr(out, "phase", s.phase);
                out << "/>\n";
                break;
            case SignalShape::Table:
                out << "    <table";
                attr(out, "target", s.targetCapability);
                out << ">\n";
                for (const auto& [t, v] : s.table) {
                    out << "      <p";
                    attr(out, "t", t);
                    attr(out, "v", v);
                    out << "/>\n";
                }
                out << "    </table>\n";
                break;
        }
    }
    out << "  </signals>\n";
    out << "</scenario>\n";
    return out.str();
}

}  // namespace hfgsim::ingest
