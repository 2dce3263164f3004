// Verification suite runner: one line per criterion, nonzero exit on any
// failure.  The same suite backs the command-line `verify` subcommand; this
// binary exists so the test harness pins it independently of the CLI.
#include <cstdio>

#include "bmdisc/acceptance.hpp"

int main() {
    bool all_pass = true;
    bmdisc::run_acceptance([&all_pass](const bmdisc::CriterionResult& r) {
        all_pass = all_pass && r.pass;
        std::printf("[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
    });
    return all_pass ? 0 : 1;
}
