#include "qgeom/deformed.hpp"

#include <algorithm>
#include <sstream>

namespace qgeom {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_open_unit(double t, const char* op) {
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError(std::string(op) + ": argument must lie in (0, 1), got " + fmt(t));
    }
}

void require_positive(double t, const char* op) {
    if (!(t > 0.0)) {
        throw DomainError(std::string(op) + ": argument must be positive, got " + fmt(t));
    }
}

}  // namespace

bool DeformationParams::valid_for_geometry() const {
    if (q_ < 1.0 - kQOneTolerance || q_ >= 3.0) {
        return false;
    }
    return !deformed::concavity_interval(*this).empty;
}

namespace deformed {

double chi_q(double s, double q) {
    require_positive(s, "chi_q");
    return std::pow(s, q);
}

double ln_q(double t, double q) {
    require_positive(t, "ln_q");
    const double log_t = std::log(t);
    if (is_q_one(q)) {
        return log_t;
    }
    // (t^{1-q} - 1)/(1-q) without the cancellation near q = 1.
    return std::expm1((1.0 - q) * log_t) / (1.0 - q);
}

OpenInterval ln_q_range(double q) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (is_q_one(q)) {
        return {-inf, inf};
    }
    if (q > 1.0) {
        return {-inf, 1.0 / (q - 1.0)};
    }
    return {-1.0 / (1.0 - q), inf};
}

double exp_q(double tau, double q) {
    if (is_q_one(q)) {
        return std::exp(tau);
    }
    if (!ln_q_range(q).contains(tau)) {
        throw DomainError("exp_q: tau = " + fmt(tau) + " outside ln_q range for q = " + fmt(q));
    }
    return std::exp(std::log1p((1.0 - q) * tau) / (1.0 - q));
}

double rexp_q(double tau, double q) {
    if (is_q_one(q)) {
        return std::exp(tau);
    }
    const double base = 1.0 + (1.0 - q) * tau;
    if (base <= 0.0) {
        // max{0, .} = 0; 0^c is 0 for c > 0 and +inf for c < 0.
        return q < 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::exp(std::log1p((1.0 - q) * tau) / (1.0 - q));
}

double chi_qa(double s, const DeformationParams& params) {
    require_open_unit(s, "chi_qa");
    return std::pow(s, params.q()) * std::pow(-ln_q(s, params.q()), 1.0 - params.a());
}

double ln_qa(double t, const DeformationParams& params) {
    require_open_unit(t, "ln_qa");
    return -std::pow(-ln_q(t, params.q()), params.a()) / params.a();
}

OpenInterval ln_qa_range(const DeformationParams& params) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double q = params.q();
    const double a = params.a();
    if (q >= 1.0 || is_q_one(q)) {
        return a > 0.0 ? OpenInterval{-inf, 0.0} : OpenInterval{0.0, inf};
    }
    const double lo = -std::pow(1.0 - q, -a) / a;
    return a > 0.0 ? OpenInterval{lo, 0.0} : OpenInterval{lo, inf};
}

double exp_qa(double tau, const DeformationParams& params) {
    if (!ln_qa_range(params).contains(tau)) {
        throw DomainError("exp_qa: tau = " + fmt(tau) + " outside ln_qa range for (q, a) = (" +
                          fmt(params.q()) + ", " + fmt(params.a()) + ")");
    }
    const double w = std::pow(-params.a() * tau, 1.0 / params.a());
    return exp_q(-w, params.q());
}

ConcavityInterval concavity_interval(const DeformationParams& params) {
    const double q = params.q();
    const double a = params.a();
    const bool q_one = is_q_one(q);

    double t_lo = 0.0;
    if (q > 0.0 || (q == 0.0 && a - 1.0 > 0.0)) {
        t_lo = 0.0;
    } else if (q <= 0.0 && a - 1.0 <= 0.0) {
        t_lo = 1.0;
    } else {
        // q < 0 with a > 1.
        t_lo = 1.0 / exp_q((1.0 - a) / q, q);
    }

    double t_hi = 0.0;
    if (!q_one && q > 1.0 && 1.0 - a >= q / (q - 1.0)) {
        t_hi = 0.0;
    } else if (q <= 0.0) {
        t_hi = 1.0;
    } else {
        t_hi = 1.0 / exp_q(std::max(0.0, (1.0 - a) / q), q);
    }

    const bool nonempty = (!q_one && q > 1.0 && 1.0 - a < q / (q - 1.0)) ||
                          (q > 0.0 && (q <= 1.0 || q_one)) || (q <= 0.0 && a - 1.0 > 0.0);
    return {t_lo, t_hi, !nonempty};
}

double ln_qa_second_derivative(double t, const DeformationParams& params) {
    require_open_unit(t, "ln_qa_second_derivative");
    const double q = params.q();
    const double a = params.a();
    const double lnq = ln_q(t, q);
    const double chi = chi_qa(t, params);
    const double bracket = q * std::pow(t, q - 1.0) * lnq + (1.0 - a);
    return std::pow(-lnq, -a) / (chi * chi) * bracket;
}

CoefficientTable b_table(const DeformationParams& params, int n_max) {
    return CoefficientTable(params.q(), params.a(), n_max);
}

ExactCoefficientTable b_table_exact(const Rational& q, const Rational& a, int n_max) {
    if (a == 0) {
        throw DomainError("b_table_exact: a must be nonzero");
    }
    return ExactCoefficientTable(q, a, n_max);
}

double exp_qa_nth_derivative(double tau, const DeformationParams& params, int n) {
    if (n < 1) {
        throw DomainError("exp_qa_nth_derivative: n must be >= 1");
    }
    return exp_qa_nth_derivative(tau, params, b_table(params, n), n);
}

double exp_qa_nth_derivative(double tau, const DeformationParams& params,
                             const CoefficientTable& table, int n) {
    if (n < 1 || n > table.n_max()) {
        throw DomainError("exp_qa_nth_derivative: n = " + std::to_string(n) +
                          " not covered by coefficient table");
    }
    const double q = params.q();
    const double a = params.a();
    const double e = exp_qa(tau, params);  // validates tau
    const double w = std::pow(-a * tau, 1.0 / a);
    const std::vector<double>& b = table.row(n);
    double sum = 0.0;
    double w_pow = 1.0;
    const double w_inv = 1.0 / w;
    for (std::size_t j = 0; j < b.size(); ++j) {
        sum += b[j] * w_pow;
        w_pow *= w_inv;
    }
    const double e_exp = static_cast<double>(n - 1) * (q - 1.0) + q;
    return std::pow(e, e_exp) * std::pow(w, static_cast<double>(n) * (1.0 - a)) * sum;
}

}  // namespace deformed
}  // namespace qgeom
