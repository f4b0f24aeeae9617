#pragma once

#include <string>
#include <vector>

#include "skewlab/context.hpp"

namespace skewlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    bool quick = false;
    int threads = 1;
    std::string out_dir = "out";
    std::string cli_path;  // path to the skewlab binary (criterion 10)
    uint64_t seed = 1;
};

// Runs the acceptance suite, printing one pass/fail line per criterion, and
// writes a machine-readable summary to <out_dir>/acceptance.json.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace skewlab
