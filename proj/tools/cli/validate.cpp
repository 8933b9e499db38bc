#include "validate.hpp"

#include <algorithm>
#include <exception>
#include <ostream>

#include "json.hpp"

namespace qgeom::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

}  // namespace

std::vector<CheckResult> run_checks(const std::vector<Check>& checks, unsigned jobs) {
    std::vector<CheckResult> results(checks.size());
    parallel_for(checks.size(), jobs, [&](std::size_t i) {
        try {
            results[i] = checks[i].run();
        } catch (const std::exception& e) {
            // A throwing check is a failed check, not a crashed validator.
            results[i].passed = false;
            results[i].detail = std::string("exception: ") + e.what();
        }
        results[i].name = checks[i].name;
    });
    return results;
}

void write_check_report(std::ostream& out, const std::vector<CheckResult>& results, Format format) {
    if (format == Format::json) {
        nlohmann::ordered_json array = nlohmann::ordered_json::array();
        for (const CheckResult& r : results) {
            nlohmann::ordered_json o;
            o["invariant"] = r.name;
            o["result"] = r.passed ? "pass" : "fail";
            o["max_error"] = format_number(r.max_error, 3);
            o["tolerance"] = format_number(r.tolerance, 3);
            o["cases"] = r.cases;
            o["detail"] = r.detail;
            array.push_back(std::move(o));
        }
        out << array.dump(2) << '\n';
        return;
    }
    out << "invariant,result,max_error,tolerance,cases,detail\n";
    for (const CheckResult& r : results) {
        out << csv_field(r.name) << ',' << (r.passed ? "pass" : "fail") << ','
            << format_number(r.max_error, 3) << ',' << format_number(r.tolerance, 3) << ','
            << r.cases << ',' << csv_field(r.detail) << '\n';
    }
}

int cmd_validate(const std::string& level, const std::vector<std::string>& only, Format format,
                 unsigned jobs, std::ostream& out, std::ostream& err) {
    std::vector<Check> checks = level == "full" ? full_checks() : quick_checks();
    if (!only.empty()) {
        std::vector<Check> selected;
        for (const std::string& name : only) {
            auto it = std::find_if(checks.begin(), checks.end(),
                                   [&](const Check& c) { return c.name == name; });
            if (it == checks.end()) {
                throw UsageError("validate " + level + ": unknown invariant '" + name + "'");
            }
            selected.push_back(*it);
        }
        checks = std::move(selected);
    }
    const std::vector<CheckResult> results = run_checks(checks, jobs);
    write_check_report(out, results, format);
    std::vector<std::string> failed;
    for (const CheckResult& r : results) {
        if (!r.passed) {
            failed.push_back(r.name);
        }
    }
    if (failed.empty()) {
        return kExitOk;
    }
    err << "validate " << level << ": " << failed.size() << " of " << results.size()
        << " invariants failed:";
    for (const std::string& name : failed) {
        err << ' ' << name;
    }
    err << '\n';
    return kExitNumerical;
}

}  // namespace qgeom::cli
