#include "hfgsim/cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

namespace hfgsim::cli {

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    const auto conc = concentrations(traj);
    const int waterCount = traj.placeIndex.waterCount;

    std::string out = "time_s";
    for (int w = 0; w < waterCount; ++w) {
        const std::string& id = traj.placeIndex.places[w].bufferId;
        out += ",V_" + id + ",m_" + id + ",c_" + id;
    }
    for (const std::string& id : traj.capabilityIndex.ids) {
        out += ",U_" + id;
    }
    out += "\n";

    for (int row = 0; row < traj.rows(); ++row) {
        append_number(out, traj.times[row]);
        const auto state = traj.state_row(row);
        for (int w = 0; w < waterCount; ++w) {
            const int n = traj.placeIndex.nitrogen_index_of(traj.placeIndex.places[w].bufferId);
            out += ',';
            append_number(out, state[w]);
            out += ',';
            append_number(out, state[n]);
            out += ',';
            if (conc[w].values[row].has_value()) {
                append_number(out, *conc[w].values[row]);
            } else {
                out += "nan";
            }
        }
        const auto firing = traj.firing_row(row);
        for (int c = 0; c < traj.capabilityCount; ++c) {
            out += ',';
            append_number(out, firing[c]);
        }
        out += "\n";
    }
    return out;
}

std::string comparison_csv(const reference::ComparisonMetrics& metrics) {
    std::string out = "buffer,linf,rmse\n";
    for (const auto& m : metrics.perBuffer) {
        out += m.bufferId;
        out += ',';
        append_number(out, m.linf);
        out += ',';
        append_number(out, m.rmse);
        out += "\n";
    }
    out += "all,";
    append_number(out, metrics.linf);
    out += ',';
    append_number(out, metrics.rmse);
    out += "\n";
    return out;
}

bool write_file_atomic(const std::filesystem::path& target, const std::string& content,
                       std::string& errorMessage) {
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            errorMessage = "cannot open '" + tmp.string() + "' for writing";
            return false;
        }
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) {
            errorMessage = "write failed for '" + tmp.string() + "'";
            return false;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        errorMessage = "cannot rename '" + tmp.string() + "' to '" + target.string() +
                       "': " + ec.message();
        std::filesystem::remove(tmp, ec);
        return false;
    }
    return true;
}

}  // namespace hfgsim::cli
