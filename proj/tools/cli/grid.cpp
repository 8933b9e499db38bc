#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "cli.hpp"

namespace qgeom::cli {

namespace {

double parse_number(const std::string& text, const std::string& flag) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw UsageError(flag + ": cannot parse '" + text + "' as a finite number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

}  // namespace

std::vector<double> expand_values(const std::vector<std::string>& specs, const std::string& flag) {
    std::vector<double> values;
    for (const std::string& spec : specs) {
        const std::vector<std::string> parts = split(spec, ':');
        if (parts.size() == 1) {
            values.push_back(parse_number(parts[0], flag));
            continue;
        }
        if (parts.size() != 3) {
            throw UsageError(flag + ": expected a number or lo:hi:step, got '" + spec + "'");
        }
        const double lo = parse_number(parts[0], flag);
        const double hi = parse_number(parts[1], flag);
        const double step = parse_number(parts[2], flag);
        if (!(step > 0.0) || hi < lo) {
            throw UsageError(flag + ": range '" + spec + "' needs lo <= hi and step > 0");
        }
        const double span = (hi - lo) / step;
        if (span > 1e6) {
            throw UsageError(flag + ": range '" + spec + "' has more than 1e6 points");
        }
        const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) {
            values.push_back(lo + static_cast<double>(i) * step);
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

QuadratureConfig resolve_tolerances(const ToleranceFlags& flags, const char* env_value) {
    QuadratureConfig config;
    if (env_value != nullptr && *env_value != '\0') {
        const std::vector<std::string> parts = split(env_value, ',');
        if (parts.size() > 2) {
            throw UsageError("QGEOM_DEFAULT_TOL: expected ABS or ABS,REL");
        }
        config.abs_tol = parse_number(parts[0], "QGEOM_DEFAULT_TOL");
        if (parts.size() == 2) {
            config.rel_tol = parse_number(parts[1], "QGEOM_DEFAULT_TOL");
        }
    }
    if (flags.abs_tol) {
        config.abs_tol = *flags.abs_tol;
    }
    if (flags.rel_tol) {
        config.rel_tol = *flags.rel_tol;
    }
    if (flags.max_evaluations) {
        config.max_evaluations = *flags.max_evaluations;
    }
    try {
        config.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return config;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(count);
    std::size_t next = 0;
    std::mutex mutex;
    auto worker = [&] {
        while (true) {
            std::size_t i = 0;
            {
                const std::lock_guard<std::mutex> lock(mutex);
                if (next >= count) {
                    return;
                }
                i = next++;
            }
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
        t.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace qgeom::cli
