#ifndef QGEOM_CLI_CHECKS_HPP
#define QGEOM_CLI_CHECKS_HPP

// Named closed-form-vs-oracle invariants. Each check is deterministic (fixed
// seeds, fixed grids) so its report is byte-stable across runs.

#include <functional>
#include <string>
#include <vector>

namespace qgeom::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;  // worst observed error in the check's own metric
    double tolerance = 0.0;
    long cases = 0;          // number of individual comparisons
    std::string detail;
};

struct Check {
    std::string name;
    std::string description;
    std::function<CheckResult()> run;
};

/// Fast core invariants: coefficient table, round trips, Fisher metric at
/// a = 1, normalisation.
std::vector<Check> quick_checks();

/// quick_checks() plus every moment, metric, divergence, Hessian and cubic
/// tensor invariant.
std::vector<Check> full_checks();

/// Lookup by name across full_checks(); throws std::out_of_range.
Check find_check(const std::string& name);

}  // namespace qgeom::cli

#endif  // QGEOM_CLI_CHECKS_HPP
