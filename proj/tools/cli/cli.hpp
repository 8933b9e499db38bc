#ifndef QGEOM_CLI_CLI_HPP
#define QGEOM_CLI_CLI_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgeom/numerics.hpp"

namespace qgeom::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3 };

/// Bad flags or values; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// ---- grid -----------------------------------------------------------------

/// Expands repeatable flag values. Each entry is a number or lo:hi:step
/// (inclusive of hi up to rounding). The result is sorted and deduplicated.
std::vector<double> expand_values(const std::vector<std::string>& specs, const std::string& flag);

struct GridSpec {
    std::vector<double> q_values{1.0};
    std::vector<double> a_values{1.0};
    std::vector<double> mu_values{0.0};
    std::vector<double> sigma_values{1.0};
    bool skip_invalid = true;
};

/// Tolerance flags resolved as flag > QGEOM_DEFAULT_TOL > built-in. The
/// environment value is "ABS" or "ABS,REL".
struct ToleranceFlags {
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::optional<std::size_t> max_evaluations;
};

QuadratureConfig resolve_tolerances(const ToleranceFlags& flags, const char* env_value);

/// Runs task(i) for i in [0, count) on up to jobs threads. Exceptions are
/// rethrown on the caller's thread (lowest index first).
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task);

// ---- rows -----------------------------------------------------------------

struct ResultRow {
    double q = 0.0;
    double a = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    std::string quantity;
    std::string component;
    double value = 0.0;
    double error_estimate = 0.0;
    std::string method;  // closed_form | quadrature
    std::string status;  // ok | skipped:<reason> | warning:<reason>

    bool operator==(const ResultRow&) const = default;
};

enum class Format { csv, json };

struct OutputOptions {
    Format format = Format::csv;
    int digits = 17;
    /// CSV only: emit a leading "# generated <UTC time>" comment line.
    bool timestamp = true;
};

/// %.{digits}g; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v, int digits);

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, const OutputOptions& opts);

/// Reads rows written by write_rows in CSV form; comment lines are skipped.
std::vector<ResultRow> parse_csv(std::istream& in);

// ---- entry point ----------------------------------------------------------

/// The whole command-line program; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgeom::cli

#endif  // QGEOM_CLI_CLI_HPP
