#pragma once

#include <filesystem>
#include <string>

#include "hfgsim/reference.hpp"
#include "hfgsim/simulator.hpp"

namespace hfgsim::cli {

/// Header: time_s, then V_<buffer>, m_<buffer>, c_<buffer> per buffer in
/// place-index order, then U_<capability> per capability. Numbers are
/// printed with %.17g; undefined concentrations print as nan. Output is
/// deterministic and stable-ordered for golden-file comparison.
std::string trajectory_csv(const Trajectory& traj);

/// Header: buffer,linf,rmse; one row per buffer plus an "all" row.
std::string comparison_csv(const reference::ComparisonMetrics& metrics);

/// Writes content to a temporary file in the target directory and renames
/// it into place, so a failed run leaves no partial file. Returns false and
/// fills errorMessage on I/O failure.
bool write_file_atomic(const std::filesystem::path& target, const std::string& content,
                       std::string& errorMessage);

}  // namespace hfgsim::cli
