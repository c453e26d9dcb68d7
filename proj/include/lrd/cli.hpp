#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrd/quadrature.hpp"

namespace lrd {

enum class Command { Kernel, Ar, Predict, Baxter, Simulate, Validate, Verify };

struct RunConfig {
    std::string modelPath;
    Command command = Command::Verify;
    std::string outputPath;  ///< empty = stdout
    QuadratureConfig quadrature;
    std::optional<std::uint64_t> seed;
    int threads = 0;

    // command-specific flags
    double t0 = 0.0, t1 = 0.0, T = 0.0;
    bool hasT0 = false, hasT1 = false, hasT = false;
    double t2 = 0.0;
    bool hasT2 = false;
    std::vector<double> sList, uList, t0List;
    double H = 0.0;
    bool hasH = false;
    int nMax = 3;
    double gridMin = 0.0, gridMax = 0.0, gridStep = 0.0;
    std::uint64_t replicates = 0;
    std::string suite = "fbm-closed-forms";
    std::string residualsPath;
    int coeffSamples = 129;
};

/// Exit codes: 0 success, 2 usage error, 3 numerical failure.
int run(const RunConfig& config);

/// argv front end (CLI11); builds a RunConfig and dispatches to run().
int run_main(int argc, char** argv);

}  // namespace lrd
