#include "runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"zfscale: scaling-limit experiments for factorizing S-matrix models"};
    app.require_subcommand(1);
    zfscale::cli::RunOptions opts;
    std::string config;
    auto* run = app.add_subcommand("run", "Run one experiment config");
    run->add_option("config", config, "Experiment config (JSON)")->required();
    run->add_option("--out", opts.out_dir, "Output directory");
    run->add_option("--tol-scale", opts.tol_scale, "Multiply every tolerance by this factor");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : zfscale::cli::kInputError;
    }
    return zfscale::cli::run_file(config, opts, std::cout);
}
