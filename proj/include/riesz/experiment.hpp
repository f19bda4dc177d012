#pragma once

#include <iosfwd>
#include <string>

#include "riesz/config.hpp"

namespace riesz {

struct RunOptions {
    std::string only;          // restrict to one certificate
    std::string out_override;  // replaces config output_dir
};

// Executes the selected certificates, writes one CSV per sweep plus
// summary.json into the output directory, and returns 0 iff every selected
// certificate passed. Reports carry no timestamps, so identical configs give
// byte-identical output.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log);

int cmd_list(std::ostream& out);

}  // namespace riesz
