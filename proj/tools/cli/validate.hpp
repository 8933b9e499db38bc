#ifndef QGEOM_CLI_VALIDATE_HPP
#define QGEOM_CLI_VALIDATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "checks.hpp"
#include "cli.hpp"

namespace qgeom::cli {

/// Runs checks on up to jobs threads; results keep the input order.
std::vector<CheckResult> run_checks(const std::vector<Check>& checks, unsigned jobs);

/// Deterministic report: no timestamps, no timings.
void write_check_report(std::ostream& out, const std::vector<CheckResult>& results, Format format);

/// `validate quick|full`; exit 0 when every check passes, 3 otherwise.
int cmd_validate(const std::string& level, const std::vector<std::string>& only, Format format,
                 unsigned jobs, std::ostream& out, std::ostream& err);

}  // namespace qgeom::cli

#endif  // QGEOM_CLI_VALIDATE_HPP
