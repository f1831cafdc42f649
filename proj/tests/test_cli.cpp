#include "runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace zfscale::cli;
namespace fs = std::filesystem;

namespace {

nlohmann::json load(const std::string& name) {
    std::ifstream in(fs::path(ZFSCALE_CONFIG_DIR) / name);
    return nlohmann::json::parse(in);
}

RunOptions temp_out(const std::string& tag) {
    RunOptions o;
    o.out_dir = fs::temp_directory_path() / ("zfscale-test-" + tag);
    fs::remove_all(o.out_dir);
    return o;
}

}  // namespace

TEST(Cli, InputErrors) {
    std::ostringstream log;
    const auto o = temp_out("input");
    EXPECT_EQ(run_config(nlohmann::json::object(), o, log), kInputError);
    EXPECT_EQ(run_config({{"kind", "nonsense"}}, o, log), kInputError);
    EXPECT_EQ(run_config({{"kind", "scattering-check"}, {"scattering", {{"type", "martian"}}}}, o, log), kInputError);
    EXPECT_EQ(run_file("/nonexistent/config.json", o, log), kInputError);
}

TEST(Cli, ScatteringCheckWritesTables) {
    std::ostringstream log;
    const auto o = temp_out("scat");
    EXPECT_EQ(run_config(load("scattering-check.json"), o, log), kPass) << log.str();
    EXPECT_TRUE(fs::exists(o.out_dir / "scattering-check.csv"));
    EXPECT_TRUE(fs::exists(o.out_dir / "massless-limit.csv"));
    EXPECT_TRUE(fs::exists(o.out_dir / "scattering-check.json"));
    EXPECT_NE(log.str().find("PASS"), std::string::npos);
    std::ifstream csv(o.out_dir / "massless-limit.csv");
    std::string caption;
    std::getline(csv, caption);
    EXPECT_EQ(caption.rfind("# ", 0), 0u);
}

TEST(Cli, TightenedTolerancesFail) {
    std::ostringstream log;
    auto o = temp_out("tight");
    o.tol_scale = 1e-12;
    EXPECT_EQ(run_config(load("scattering-check.json"), o, log), kVerdictFailed);
    EXPECT_NE(log.str().find("FAIL"), std::string::npos);
}

TEST(Cli, OverlapIsNegativeControl) {
    std::ostringstream log;
    EXPECT_EQ(run_config(load("locality-overlap.json"), temp_out("overlap"), log), kVerdictFailed);
}
