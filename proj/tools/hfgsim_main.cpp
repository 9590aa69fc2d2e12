// hfgsim: hetero-functional graph simulation of watershed water and
// nitrogen dynamics. Subcommands: run, validate, stability.

#include <CLI11.hpp>
#include <iostream>

#include "hfgsim/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Watershed hetero-functional graph simulator"};
    app.require_subcommand(1);

    // run
    std::vector<std::string> scenarios;
    std::string outputDir;
    double dtOverride = 0.0;
    long horizonOverride = 0;
    long strideOverride = 0;
    double odeDt = 0.0;
    bool compareOde = false;
    bool emitPlots = false;
    bool emitTensors = false;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "Simulate one or more scenarios");
    run->add_option("scenario", scenarios, "Scenario XML file(s)")->required();
    run->add_option("-o,--out", outputDir,
                    "Output directory (single scenario only; default <stem>_out)");
    run->add_option("--dt", dtOverride, "Override the time step [s]")
        ->check(CLI::PositiveNumber);
    run->add_option("--horizon", horizonOverride, "Override the horizon [steps]")
        ->check(CLI::PositiveNumber);
    run->add_option("--stride", strideOverride, "Override the recording stride")
        ->check(CLI::PositiveNumber);
    run->add_option("--ode-dt", odeDt, "RK4 reference step [s] (with --compare-ode)")
        ->check(CLI::PositiveNumber);
    run->add_flag("--compare-ode", compareOde,
                  "Also integrate the continuous-time reference and write "
                  "reference.csv and comparison.csv");
    run->add_flag("--emit-plots", emitPlots, "Write SVG concentration charts");
    run->add_flag("--emit-tensors", emitTensors, "Write incidence tensor triplet CSVs");
    run->add_option("--jobs", jobs, "Run scenarios concurrently on N threads")
        ->check(CLI::PositiveNumber);

    // validate
    std::string validatePath;
    CLI::App* val = app.add_subcommand("validate", "Check a scenario against the schema "
                                                   "and architecture invariants");
    val->add_option("scenario", validatePath, "Scenario XML file")->required();

    // stability
    std::string stabilityPath;
    CLI::App* stab = app.add_subcommand(
        "stability", "Print per-edge time constants and the largest safe Euler step");
    stab->add_option("scenario", stabilityPath, "Scenario XML file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (scenarios.size() > 1 && !outputDir.empty()) {
            std::cerr << "error: --out applies to a single scenario\n";
            return hfgsim::cli::kExitIo;
        }
        std::vector<hfgsim::cli::RunRequest> requests;
        for (const std::string& path : scenarios) {
            hfgsim::cli::RunRequest request;
            request.scenarioPath = path;
            request.outputDir = scenarios.size() == 1 ? outputDir : "";
            if (dtOverride > 0.0) request.dtOverride = dtOverride;
            if (horizonOverride > 0) request.horizonOverride = horizonOverride;
            if (strideOverride > 0) request.strideOverride = strideOverride;
            if (odeDt > 0.0) request.odeDtOverride = odeDt;
            request.compareOde = compareOde;
            request.emitPlots = emitPlots;
            request.emitTensors = emitTensors;
            requests.push_back(std::move(request));
        }
        if (requests.size() == 1) {
            return hfgsim::cli::cmd_run(requests.front(), std::cout, std::cerr);
        }
        return hfgsim::cli::run_many(requests, jobs, std::cout, std::cerr);
    }
    if (val->parsed()) {
        return hfgsim::cli::cmd_validate(validatePath, std::cout, std::cerr);
    }
    return hfgsim::cli::cmd_stability(stabilityPath, std::cout, std::cerr);
}
