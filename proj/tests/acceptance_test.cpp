// Runs every acceptance criterion and prints one pass/fail line per criterion.
#include <cstdio>

#include "redgeo/experiment.hpp"

int main() {
    bool all = true;
    for (const auto& r : redgeo::acceptance::run_all()) {
        std::printf("criterion %2d [%s]: %s (%.1fs) %s\n", r.index, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("acceptance: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}
