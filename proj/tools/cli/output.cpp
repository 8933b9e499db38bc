#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <ostream>

#include "cli.hpp"
#include "json.hpp"

namespace qgeom::cli {

namespace {

const char* const kColumns = "q,a,mu,sigma,quantity,component,value,error_estimate,method,status";

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

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

double parse_cell(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw UsageError("parse_csv: bad number '" + s + "'");
    }
    return v;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Rounds v to the requested significant digits so JSON shows the same digits as CSV.
nlohmann::json json_number(double v, int digits) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::strtod(format_number(v, digits).c_str(), nullptr);
}

}  // namespace

std::string format_number(double v, int digits) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, const OutputOptions& opts) {
    if (opts.format == Format::json) {
        nlohmann::ordered_json array = nlohmann::ordered_json::array();
        for (const ResultRow& r : rows) {
            nlohmann::ordered_json o;
            o["q"] = json_number(r.q, opts.digits);
            o["a"] = json_number(r.a, opts.digits);
            o["mu"] = json_number(r.mu, opts.digits);
            o["sigma"] = json_number(r.sigma, opts.digits);
            o["quantity"] = r.quantity;
            o["component"] = r.component;
            o["value"] = json_number(r.value, opts.digits);
            o["error_estimate"] = json_number(r.error_estimate, opts.digits);
            o["method"] = r.method;
            o["status"] = r.status;
            array.push_back(std::move(o));
        }
        out << array.dump(2) << '\n';
        return;
    }
    if (opts.timestamp) {
        out << "# generated " << utc_now() << '\n';
    }
    out << kColumns << '\n';
    const int d = opts.digits;
    for (const ResultRow& r : rows) {
        out << format_number(r.q, d) << ',' << format_number(r.a, d) << ','
            << format_number(r.mu, d) << ',' << format_number(r.sigma, d) << ','
            << csv_field(r.quantity) << ',' << csv_field(r.component) << ','
            << format_number(r.value, d) << ',' << format_number(r.error_estimate, d) << ','
            << csv_field(r.method) << ',' << csv_field(r.status) << '\n';
    }
}

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!seen_header) {
            if (line != kColumns) {
                throw UsageError("parse_csv: unexpected header '" + line + "'");
            }
            seen_header = true;
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 10) {
            throw UsageError("parse_csv: expected 10 fields, got " + std::to_string(f.size()));
        }
        ResultRow r;
        r.q = parse_cell(f[0]);
        r.a = parse_cell(f[1]);
        r.mu = parse_cell(f[2]);
        r.sigma = parse_cell(f[3]);
        r.quantity = f[4];
        r.component = f[5];
        r.value = parse_cell(f[6]);
        r.error_estimate = parse_cell(f[7]);
        r.method = f[8];
        r.status = f[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace qgeom::cli
