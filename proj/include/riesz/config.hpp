#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "riesz/verify.hpp"

namespace riesz {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declarative experiment description; schema documented in the README.
struct ExperimentConfig {
    PotentialFamily family;
    std::vector<int> sweep_dims = {1, 2, 4, 8, 16};
    std::vector<int> l1_dims = {1, 2, 4, 8};
    BackendConfig backend;
    std::vector<double> a_values = {0.5, 1.0, 2.0};
    std::vector<double> l1_a_values = {0.5, 1.0};
    RieszParams rp;
    double N = 1.0;
    PathConfig reflection_paths;
    std::vector<std::string> certificates;  // subset of the catalog, canonical order
    std::string output_dir = "reports";
};

ExperimentConfig load_config(const std::string& path);        // throws ConfigError
ExperimentConfig parse_config_text(const std::string& text);  // throws ConfigError

}  // namespace riesz
