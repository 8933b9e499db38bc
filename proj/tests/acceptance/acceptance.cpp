// One PASS/FAIL line per acceptance criterion. Each criterion runs the named
// invariants from the validate suite and is also held to its time budget.
//
//   acceptance [--only N]...

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "checks.hpp"

namespace {

using qgeom::cli::CheckResult;

struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> checks;
    double limit_seconds;  // 0: no runtime requirement
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "coefficient table", {"coefficient_table"}, 1.0},
        {2, "derivative formula vs finite differences", {"derivative_fd"}, 5.0},
        {3, "concavity on I_{q,a}", {"concavity"}, 5.0},
        {4, "normalisation", {"normalization"}, 5.0},
        {5, "entropy gauge identity", {"gauge_entropy"}, 60.0},
        {6, "divergence separation", {"gauge_separation"}, 30.0},
        {7, "divergence positivity", {"divergence_positivity"}, 60.0},
        {8, "moment closed forms", {"phi_closed_form", "phi_residue"}, 60.0},
        {9, "metric", {"metric_fisher", "metric_two_term", "metric_offdiagonal"}, 120.0},
        {10, "Hessian consistency", {"hessian"}, 120.0},
        {11, "cubic tensor", {"cubic_symmetry", "cubic_unit"}, 120.0},
        {12, "validate full exits 0 and is byte-deterministic", {}, 0.0},
    };
    return list;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

struct Capture {
    int exit_code = -1;
    std::string out;
};

Capture capture(const std::string& command) {
    Capture c;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return c;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        c.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    c.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return c;
}

// Criterion 12 goes through the real binary, as a user would.
bool run_cli_criterion(std::string& detail) {
    const std::string command = std::string(QGEOM_TOOL_PATH) + " validate full 2>/dev/null";
    const Capture first = capture(command);
    const Capture second = capture(command);
    const bool identical = first.out == second.out && !first.out.empty();
    detail = "exit codes " + std::to_string(first.exit_code) + "," +
             std::to_string(second.exit_code) + "; output " +
             (identical ? "byte-identical" : "differs") + " (" +
             std::to_string(first.out.size()) + " bytes)";
    return first.exit_code == 0 && second.exit_code == 0 && identical;
}

bool run_check_criterion(const Criterion& c, std::string& detail) {
    bool passed = true;
    for (const std::string& name : c.checks) {
        const CheckResult r = qgeom::cli::find_check(name).run();
        passed = passed && r.passed;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += name + " " + (r.passed ? "pass" : "fail") + " measured " +
                  fmt("%.3g", r.max_error) + " vs " + fmt("%.3g", r.tolerance);
        if (!r.passed && !r.detail.empty()) {
            detail += " [" + r.detail + "]";
        }
    }
    return passed;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only.insert(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--only N]...\n");
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion& c : criteria()) {
        if (!only.empty() && only.count(c.number) == 0) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = false;
        try {
            passed = c.checks.empty() ? run_cli_criterion(detail) : run_check_criterion(c, detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(start);
        const bool in_time = c.limit_seconds == 0.0 || elapsed < c.limit_seconds;
        const std::string timing =
            c.limit_seconds == 0.0
                ? fmt("%.2f s", elapsed)
                : fmt("%.2f s", elapsed) + " of " + fmt("%.0f s", c.limit_seconds) +
                      (in_time ? "" : " EXCEEDED");
        passed = passed && in_time;
        failures += passed ? 0 : 1;
        std::printf("criterion %2d: %s | %s | %s (%s)\n", c.number, passed ? "PASS" : "FAIL",
                    c.title.c_str(), detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
