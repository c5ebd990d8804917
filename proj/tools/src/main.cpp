#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gammalab/tools/studies.hpp"

int main(int argc, char** argv) {
    using namespace gammalab::tools;
    CLI::App app{"gammalab: non-local free-discontinuity energy laboratory"};
    app.set_version_flag("--version", kToolVersion);
    CliOptions options;
    std::string config;
    std::string out = ".";
    app.add_option("study", options.study, "phi | tube | gamma1d | elastic2d | cell | homdet | homstoch")
        ->required()
        ->check(CLI::IsMember(study_names()));
    app.add_option("--config", config, "JSON config file")->required();
    app.add_option("--out", out, "output directory");
    app.add_flag("--plots", options.plots, "also write SVG plots");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }
    options.config = config;
    options.out = out;
    return run_cli(options, std::cerr);
}
