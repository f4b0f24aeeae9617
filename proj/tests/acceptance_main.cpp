// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. The CLI path comes from the build so criterion 10 can rerun
// commands at two thread counts.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "skewlab/acceptance.hpp"

#ifndef SKEWLAB_BIN_PATH
#define SKEWLAB_BIN_PATH ""
#endif

int main(int argc, char** argv) {
    skewlab::AcceptanceOptions opt;
    opt.cli_path = SKEWLAB_BIN_PATH;
    opt.out_dir = "acceptance_out";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            opt.threads = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc)
            opt.out_dir = argv[++i];
    }
    auto results = skewlab::run_acceptance(opt);
    bool ok = skewlab::all_passed(results);
    std::printf("%s\n", ok ? "acceptance: ALL PASS" : "acceptance: FAILURES");
    return ok ? 0 : 1;
}
