#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace cantorlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured values against their bands
    double seconds = 0;
};

inline constexpr int criterion_count = 15;

/// Runs the selected criteria (all when `only` is empty) in order, reporting
/// each through `on_result` as it finishes.  A criterion that throws fails
/// with the exception text as its detail.
std::vector<CriterionResult> run_acceptance(const std::set<int>& only = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace cantorlab
