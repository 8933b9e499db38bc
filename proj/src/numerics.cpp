#include "qgeom/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "qgeom/error.hpp"

namespace qgeom {

namespace {

// 21-point Kronrod abscissae (positive half, descending) with the embedded
// 10-point Gauss rule on the odd indices.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980372185, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr int kPanelsPerSegment = 4;
constexpr std::size_t kEvalsPerPanel = 21;

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

using Mapped = std::function<double(double)>;

double checked(const Mapped& g, double t) {
    const double v = g(t);
    if (std::isnan(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "quadrature: integrand returned NaN at mapped abscissa " << t;
        throw NumericalError(os.str());
    }
    return v;
}

Panel gauss_kronrod(const Mapped& g, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, 10> left{};
    std::array<double, 10> right{};
    const double fc = checked(g, center);
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    double resg = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * kXgk[i];
        left[i] = checked(g, center - dx);
        right[i] = checked(g, center + dx);
        const double pair = left[i] + right[i];
        resk += kWgk[i] * pair;
        resabs += kWgk[i] * (std::abs(left[i]) + std::abs(right[i]));
        if (i % 2 == 1) {
            resg += kWg[i / 2] * pair;
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (std::size_t i = 0; i < 10; ++i) {
        resasc += kWgk[i] * (std::abs(left[i] - mean) + std::abs(right[i] - mean));
    }
    const double h = std::abs(half);
    resk *= half;
    resg *= half;
    resabs *= h;
    resasc *= h;

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > tiny / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {lo, hi, resk, err};
}

// An infinite value would otherwise make its own relative tolerance infinite.
bool within_tolerance(double value, double error, const QuadratureConfig& config) {
    if (!std::isfinite(value) || !std::isfinite(error)) {
        return false;
    }
    return error <= std::max(config.abs_tol, config.rel_tol * std::abs(value));
}

// Global adaptive refinement over one or more mapped segments.
IntegralEstimate adaptive(const std::vector<Mapped>& segments,
                          const std::vector<std::pair<double, double>>& bounds,
                          const QuadratureConfig& config) {
    std::vector<Panel> frozen;  // too narrow to bisect further
    IntegralEstimate out;

    std::vector<std::priority_queue<Panel, std::vector<Panel>, ByError>> heaps(segments.size());
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto [lo, hi] = bounds[s];
        const double width = (hi - lo) / kPanelsPerSegment;
        for (int i = 0; i < kPanelsPerSegment; ++i) {
            const double a = lo + width * i;
            const double b = i + 1 == kPanelsPerSegment ? hi : lo + width * (i + 1);
            heaps[s].push(gauss_kronrod(segments[s], a, b));
            out.evaluations += kEvalsPerPanel;
        }
    }

    auto totals = [&]() {
        double value = 0.0;
        double error = 0.0;
        for (const auto& h : heaps) {
            auto copy = h;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
        for (const Panel& p : frozen) {
            value += p.value;
            error += p.error;
        }
        return std::pair{value, error};
    };

    auto [value, error] = totals();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t since_resum = 0;

    while (true) {
        if (within_tolerance(value, error, config)) {
            std::tie(value, error) = totals();
            if (within_tolerance(value, error, config)) {
                break;
            }
        }
        if (out.evaluations + 2 * kEvalsPerPanel > config.max_evaluations) {
            break;
        }
        // Worst panel over all segments.
        std::size_t worst = heaps.size();
        double worst_err = -1.0;
        for (std::size_t s = 0; s < heaps.size(); ++s) {
            if (!heaps[s].empty() && heaps[s].top().error > worst_err) {
                worst_err = heaps[s].top().error;
                worst = s;
            }
        }
        if (worst == heaps.size()) {
            break;
        }
        const Panel p = heaps[worst].top();
        heaps[worst].pop();
        const double mid = 0.5 * (p.lo + p.hi);
        const double scale = std::max({std::abs(p.lo), std::abs(p.hi), 1e-300});
        if (p.hi - p.lo <= 8.0 * eps * scale || mid <= p.lo || mid >= p.hi) {
            frozen.push_back(p);
            continue;
        }
        const Panel left = gauss_kronrod(segments[worst], p.lo, mid);
        const Panel right = gauss_kronrod(segments[worst], mid, p.hi);
        out.evaluations += 2 * kEvalsPerPanel;
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        heaps[worst].push(left);
        heaps[worst].push(right);
        if (++since_resum == 64) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }

    std::tie(value, error) = totals();
    out.value = value;
    out.abs_error_estimate = error;
    out.converged = within_tolerance(value, error, config);
    return out;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("QuadratureConfig: tolerances must be positive");
    }
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(center)) {
        throw DomainError("QuadratureConfig: scale must be positive and center finite");
    }
    if (max_evaluations < numerics::minimum_evaluations()) {
        throw DomainError("QuadratureConfig: max_evaluations below the initial panel count (" +
                          std::to_string(numerics::minimum_evaluations()) + ")");
    }
}

namespace numerics {

std::size_t minimum_evaluations() { return 2 * kPanelsPerSegment * kEvalsPerPanel; }

double log_gamma(double s) {
    if (!(s > 0.0)) {
        throw DomainError("log_gamma: argument must be positive");
    }
    return boost::math::lgamma(s);
}

double beta(double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) {
        throw DomainError("beta: arguments must be positive");
    }
    return boost::math::beta(s, t);
}

double double_factorial_odd(int k) {
    if (k < 0) {
        throw DomainError("double_factorial_odd: k must be >= 0");
    }
    double out = 1.0;
    for (int i = 1; i <= k; ++i) {
        out *= 2.0 * i - 1.0;
    }
    return out;
}

IntegralEstimate integrate_real_line(const std::function<double(double)>& f,
                                     const QuadratureConfig& config) {
    config.validate();
    const double c = config.center;
    const double s = config.scale;
    auto half_line = [&f, c, s](double sign) {
        return Mapped([&f, c, s, sign](double theta) {
            const double sin_t = std::sin(theta);
            const double x = c + sign * s * (std::cos(theta) / sin_t);
            const double fx = f(x);
            if (fx == 0.0) {
                return 0.0;  // keeps 0 * inf out of underflowed tails
            }
            return fx * s / sin_t / sin_t;  // sin_t^2 would underflow first
        });
    };
    const double half_pi = std::numbers::pi / 2.0;
    return adaptive({half_line(+1.0), half_line(-1.0)}, {{0.0, half_pi}, {0.0, half_pi}}, config);
}

IntegralEstimate integrate_interval(const std::function<double(double)>& f, double lo,
                                    double hi, const QuadratureConfig& config) {
    config.validate();
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate_interval: need finite lo < hi");
    }
    return adaptive({Mapped(f)}, {{lo, hi}}, config);
}

double finite_difference(const std::function<double(double)>& f, double x, int order,
                         double step) {
    if (!(step > 0.0)) {
        throw DomainError("finite_difference: step must be positive");
    }
    const double h = step;
    switch (order) {
        case 1:
            return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2:
            return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
                   (2.0 * h * h * h);
        default:
            throw DomainError("finite_difference: order must be 1, 2 or 3");
    }
}

double default_step(int order, double scale) {
    return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 2)) * scale;
}

}  // namespace numerics
}  // namespace qgeom
