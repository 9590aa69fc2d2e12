#pragma once

// Command layer behind the executable, exposed as a library so the exit
// codes and file outputs are directly testable.
//
// Exit codes: 0 success, 1 scenario/validation errors, 2 aborted simulation
// (non-finite state or nitrogen underflow), 3 I/O errors.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hfgsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSimulation = 2;
inline constexpr int kExitIo = 3;

struct RunRequest {
    std::string scenarioPath;
    std::string outputDir;  // default: "<scenario stem>_out" in the cwd
    std::optional<double> dtOverride;
    std::optional<long> horizonOverride;
    std::optional<long> strideOverride;
    std::optional<double> odeDtOverride;
    bool compareOde = false;
    bool emitPlots = false;
    bool emitTensors = false;
};

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& scenarioPath, std::ostream& out, std::ostream& err);
int cmd_stability(const std::string& scenarioPath, std::ostream& out, std::ostream& err);

/// Runs independent scenarios concurrently on up to jobs threads, each with
/// its own output directory; buffered output is printed in request order.
/// Returns the largest exit code.
int run_many(const std::vector<RunRequest>& requests, int jobs, std::ostream& out,
             std::ostream& err);

}  // namespace hfgsim::cli
