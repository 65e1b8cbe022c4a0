// Acceptance suite: one pass/fail line per criterion.

#include <cstdio>
#include <cstdlib>

#include "paraset/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 1;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    auto print = [](const paraset::accept::CriterionResult& r) {
        std::printf("criterion %d [%s]: %s (%.1f s)%s%s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.empty() ? "" : " - ",
                    r.detail.c_str());
        std::fflush(stdout);
    };
    auto results = paraset::accept::run_acceptance(seed, {}, print);
    bool ok = paraset::accept::all_passed(results);
    std::printf("acceptance: %s\n", ok ? "ALL PASS" : "FAILURES");
    return ok ? 0 : 1;
}
