#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riesz/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rieszlab: semigroup and Riesz-transform certificate runner"};
    app.require_subcommand(1);

    std::string config_path, only, out_dir;
    CLI::App* run = app.add_subcommand("run", "run certificates from a config file");
    run->add_option("config", config_path, "path to the experiment config (JSON)")
        ->required();
    run->add_option("--only", only, "run a single certificate by name");
    run->add_option("--out", out_dir, "override the output directory");

    CLI::App* list = app.add_subcommand("list", "list available certificates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage problems are config-level errors
    }

    if (list->parsed()) return riesz::cmd_list(std::cout);

    try {
        const riesz::ExperimentConfig cfg = riesz::load_config(config_path);
        riesz::RunOptions opt;
        opt.only = only;
        opt.out_override = out_dir;
        return riesz::run_experiment(cfg, opt, std::cout);
    } catch (const riesz::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 3;
    }
}
