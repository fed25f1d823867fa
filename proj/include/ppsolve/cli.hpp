#pragma once

#include <cstdint>
#include <iostream>
#include <string>

namespace ppsolve {

// One CLI invocation. Exactly one of spec_path / demo_id selects the system.
struct RunConfig {
    std::string command;  // check | bounds | solve-shooting | solve-operator | verify | export | demo
    std::string spec_path;
    std::string demo_id;
    int grid = 512;
    double rtol = 1e-13;
    double atol = 1e-15;
    double op_tol = 1e-9;
    double damping = 0.5;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    int proof_steps = 0;  // bounds: number of random shell trials (0 = skip)
};

/// Exit status: 0 success, 1 hypothesis failure, 2 solver or input failure.
int run(const RunConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace ppsolve
