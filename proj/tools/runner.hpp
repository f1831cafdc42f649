#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace zfscale::cli {

enum ExitCode : int { kPass = 0, kInputError = 1, kVerdictFailed = 2, kModuleError = 3 };

struct RunOptions {
    std::filesystem::path out_dir = "results";
    double tol_scale = 1.0;
};

// Runs one experiment config; writes CSV/JSON/plot files under out_dir.
int run_config(const nlohmann::json& config, const RunOptions& opts, std::ostream& log);
int run_file(const std::filesystem::path& path, const RunOptions& opts, std::ostream& log);

}  // namespace zfscale::cli
