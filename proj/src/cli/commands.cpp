#include "hfgsim/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "hfgsim/cli/csv.hpp"
#include "hfgsim/cli/svg.hpp"
#include "hfgsim/errors.hpp"
#include "hfgsim/hfit.hpp"
#include "hfgsim/reference.hpp"
#include "hfgsim/simulator.hpp"

namespace fs = std::filesystem;

namespace hfgsim::cli {

namespace {

bool read_file(const std::string& path, std::string& content, std::string& error) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        error = "cannot read '" + path + "'";
        return false;
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    content = buffer.str();
    return true;
}

/// Parse + validate; prints problems to err and returns an exit code
/// (kExitOk when the document is usable).
int load_scenario(const std::string& path, ingest::ScenarioDocument& doc,
                  std::ostream& err) {
    std::string content;
    std::string ioError;
    if (!read_file(path, content, ioError)) {
        err << "error: " << ioError << "\n";
        return kExitIo;
    }
    try {
        doc = ingest::parse_scenario(content);
    } catch (const ScenarioError& e) {
        err << path << ": " << e.what() << "\n";
        return kExitValidation;
    }
    const ValidationReport report = validate(doc.architecture);
    if (!report.valid()) {
        err << path << ":\n" << report.to_string();
        return kExitValidation;
    }
    return kExitOk;
}

fs::path output_dir_for(const RunRequest& request) {
    if (!request.outputDir.empty()) return fs::path(request.outputDir);
    return fs::path(fs::path(request.scenarioPath).stem().string() + "_out");
}

/// Largest RK4 step that divides the recording interval and respects both
/// a quarter of the stability bound and a quarter of the Euler step.
double choose_ode_dt(const ingest::ScenarioDocument& doc,
                     const std::optional<double>& requested) {
    const double interval = doc.config.dt * static_cast<double>(doc.config.stride);
    double target = doc.config.dt / 4.0;
    try {
        target = std::min(target,
                          stability_max_dt(doc.architecture, doc.config.constants) / 4.0);
    } catch (const NoTransportEdges&) {
    }
    if (requested.has_value() && *requested > 0.0) target = *requested;
    const long steps = std::max(1L, std::lround(std::ceil(interval / target - 1e-9)));
    return interval / static_cast<double>(steps);
}

}  // namespace

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    ingest::ScenarioDocument doc;
    if (int code = load_scenario(request.scenarioPath, doc, err); code != kExitOk) {
        return code;
    }
    if (request.dtOverride.has_value()) doc.config.dt = *request.dtOverride;
    if (request.horizonOverride.has_value()) doc.config.horizonSteps = *request.horizonOverride;
    if (request.strideOverride.has_value()) doc.config.stride = *request.strideOverride;
    if (!doc.config.valid()) {
        err << "error: overrides left the config invalid (dt > 0, horizon >= 1, "
               "stride divides horizon)\n";
        return kExitValidation;
    }

    Trajectory traj;
    try {
        traj = simulate(doc);
    } catch (const SimulationError& e) {
        err << request.scenarioPath << ": " << e.what() << " (step " << e.step()
            << ")\n";
        return kExitSimulation;
    }

    long clampCount = 0;
    for (const RecordedWarning& w : traj.warnings) {
        if (w.step < 0) {
            err << "warning: dt exceeds the stability bound by a factor of " << w.factor
                << "\n";
        } else {
            ++clampCount;
        }
    }
    if (clampCount > 0) {
        err << "warning: " << clampCount
            << " withdrawal clamp event(s); volumes were held at their minimum\n";
    }

    const fs::path dir = output_dir_for(request);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create output directory '" << dir.string()
            << "': " << ec.message() << "\n";
        return kExitIo;
    }

    std::string ioError;
    auto emit = [&](const fs::path& name, const std::string& content) {
        if (!write_file_atomic(dir / name, content, ioError)) {
            err << "error: " << ioError << "\n";
            return false;
        }
        out << "wrote " << (dir / name).string() << "\n";
        return true;
    };

    if (!emit("trajectory.csv", trajectory_csv(traj))) return kExitIo;

    if (request.compareOde) {
        Trajectory ref;
        try {
            ref = reference::rk4_integrate(doc, choose_ode_dt(doc, request.odeDtOverride));
        } catch (const SimulationError& e) {
            err << request.scenarioPath << ": reference integration failed: " << e.what()
                << "\n";
            return kExitSimulation;
        }
        const reference::ComparisonMetrics metrics =
            reference::compare_trajectories(traj, ref);
        if (!emit("reference.csv", trajectory_csv(ref))) return kExitIo;
        if (!emit("comparison.csv", comparison_csv(metrics))) return kExitIo;
    }

    if (request.emitTensors) {
        const EngineeringSystemNet net = build_net(doc.architecture);
        if (!emit("M_plus.csv", to_triplet_csv(net.tensors.plus))) return kExitIo;
        if (!emit("M_minus.csv", to_triplet_csv(net.tensors.minus))) return kExitIo;
        if (!emit("M.csv", to_triplet_csv(net.tensors.net))) return kExitIo;
    }

    if (request.emitPlots) {
        const auto conc = concentrations(traj);
        const struct {
            BufferClass cls;
            const char* name;
        } classes[] = {{BufferClass::Lake, "lake"},
                       {BufferClass::Land, "land"},
                       {BufferClass::Point, "point"}};
        for (const auto& [cls, name] : classes) {
            std::vector<ChartSeries> series;
            for (int w = 0; w < traj.placeIndex.waterCount; ++w) {
                if (traj.placeIndex.places[w].bufferClass != cls) continue;
                series.push_back({conc[w].bufferId, conc[w].values});
            }
            if (series.empty()) continue;
            const std::string title =
                std::string("Nitrogen concentration, ") + name + " buffers";
            const std::string svg =
                line_chart_svg(title, "time [s]", "concentration [kg/m^3]", traj.times,
                               series);
            if (!emit(std::string("concentration_") + name + ".svg", svg)) return kExitIo;
        }
    }

    return kExitOk;
}

int cmd_validate(const std::string& scenarioPath, std::ostream& out, std::ostream& err) {
    std::string content;
    std::string ioError;
    if (!read_file(scenarioPath, content, ioError)) {
        err << "error: " << ioError << "\n";
        return kExitIo;
    }
    ingest::ScenarioDocument doc;
    try {
        doc = ingest::parse_scenario(content);
    } catch (const ScenarioError& e) {
        err << scenarioPath << ": " << e.what() << "\n";
        return kExitValidation;
    }
    const ValidationReport report = validate(doc.architecture);
    if (!report.valid()) {
        out << report.to_string();
        return kExitValidation;
    }
    out << scenarioPath << ": valid ("
        << doc.architecture.buffers.size() << " buffers, "
        << doc.architecture.capabilities.size() << " capabilities, "
        << doc.architecture.signals.size() << " signals)\n";
    return kExitOk;
}

int cmd_stability(const std::string& scenarioPath, std::ostream& out, std::ostream& err) {
    ingest::ScenarioDocument doc;
    if (int code = load_scenario(scenarioPath, doc, err); code != kExitOk) return code;

    const auto edges = edge_time_constants(doc.architecture, doc.config.constants);
    if (edges.empty()) {
        err << scenarioPath << ": no water-transport edges, stability bound undefined\n";
        return kExitValidation;
    }
    char buf[64];
    for (const EdgeTimeConstant& e : edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.tau);
        out << "edge " << e.capabilityId << " tau_s=" << buf << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.17g",
                  stability_max_dt(doc.architecture, doc.config.constants));
    out << "stability_max_dt_s=" << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", doc.config.dt);
    out << "configured_dt_s=" << buf << "\n";
    return kExitOk;
}

int run_many(const std::vector<RunRequest>& requests, int jobs, std::ostream& out,
             std::ostream& err) {
    if (requests.empty()) return kExitOk;
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(requests.size())));

    std::vector<std::ostringstream> outs(requests.size());
    std::vector<std::ostringstream> errs(requests.size());
    std::vector<int> codes(requests.size(), kExitOk);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= requests.size()) break;
            codes[i] = cmd_run(requests[i], outs[i], errs[i]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    int worst = kExitOk;
    for (size_t i = 0; i < requests.size(); ++i) {
        out << outs[i].str();
        err << errs[i].str();
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

}  // namespace hfgsim::cli
