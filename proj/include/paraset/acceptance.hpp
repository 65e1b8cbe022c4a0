#ifndef PARASET_ACCEPTANCE_HPP
#define PARASET_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace paraset::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

using ProgressFn = std::function<void(const CriterionResult&)>;

/// Runs the acceptance criteria (all eight, or the subset in `only`) at their
/// pinned grids and tolerances. Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& only = {},
                                            const ProgressFn& progress = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace paraset::accept

#endif
