#ifndef QGEOM_DEFORMED_HPP
#define QGEOM_DEFORMED_HPP

// Deformed logarithm calculus: chi_q, ln_q, exp_q, the a-refined pair
// ln_{q,a}/exp_{q,a}, concavity intervals and the coefficient triangle that
// expresses every derivative of exp_{q,a}.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qgeom/error.hpp"

namespace qgeom {

/// Threshold under which q is treated as exactly 1.
inline constexpr double kQOneTolerance = 1e-12;

inline bool is_q_one(double q) { return std::abs(q - 1.0) < kQOneTolerance; }

/// The pair (q, a) controlling the deformed calculus. a is never zero.
class DeformationParams {
public:
    DeformationParams(double q, double a) : q_(q), a_(a) {
        if (!std::isfinite(q) || !std::isfinite(a)) {
            throw DomainError("DeformationParams: q and a must be finite");
        }
        if (a == 0.0) {
            throw DomainError("DeformationParams: a must be nonzero");
        }
    }

    double q() const { return q_; }
    double a() const { return a_; }

    /// 1 <= q < 3 and I_{q,a} nonempty; the regime where the refined
    /// entropies and metrics are defined.
    bool valid_for_geometry() const;

private:
    double q_;
    double a_;
};

/// Open interval (lo, hi); either end may be infinite.
struct OpenInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return lo < x && x < hi; }
};

/// I_{q,a} = (t_lo, t_hi), the subinterval of (0,1) where ln_{q,a} is
/// strictly concave.
struct ConcavityInterval {
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool empty = true;

    bool contains(double t) const { return !empty && t_lo < t && t < t_hi; }
};

namespace deformed {

double chi_q(double s, double q);
double ln_q(double t, double q);
double exp_q(double tau, double q);

/// exp_q totalised to the whole line: 0 below the support for q < 1 and
/// +inf at (and beyond) the pole for q > 1.
double rexp_q(double tau, double q);

/// ln_q((0, inf)).
OpenInterval ln_q_range(double q);

double chi_qa(double s, const DeformationParams& params);
double ln_qa(double t, const DeformationParams& params);
double exp_qa(double tau, const DeformationParams& params);

/// ln_{q,a}((0, 1)).
OpenInterval ln_qa_range(const DeformationParams& params);

ConcavityInterval concavity_interval(const DeformationParams& params);

/// Closed-form second derivative of ln_{q,a} on (0, 1).
double ln_qa_second_derivative(double t, const DeformationParams& params);

using Rational = boost::multiprecision::cpp_rational;

/// Triangle b[n][j], 1 <= n <= n_max, 0 <= j <= n-1, with
///   d^n/dtau^n exp_{q,a}(tau)
///     = E^{(n-1)(q-1)+q} w^{n(1-a)} sum_j b[n][j] w^{-j},
/// where E = exp_{q,a}(tau) and w = (-a tau)^{1/a}.
template <class T>
class BasicCoefficientTable {
public:
    BasicCoefficientTable(T q, T a, int n_max) : q_(q), a_(a), rows_() {
        if (n_max < 1) {
            throw DomainError("b_table: n_max must be >= 1, got " + std::to_string(n_max));
        }
        rows_.reserve(static_cast<std::size_t>(n_max));
        rows_.push_back({T(1)});
        const T one(1);
        for (int n = 1; n < n_max; ++n) {
            const std::vector<T>& prev = rows_.back();
            std::vector<T> next(static_cast<std::size_t>(n) + 1);
            const T nn(n);
            next[0] = (nn * a_ * (q_ - one) + one) * prev[0];
            for (int j = 1; j <= n - 1; ++j) {
                const T jj(j);
                next[j] = ((nn * a_ + jj) * (q_ - one) + one) * prev[j] -
                          (nn * (one - a_) - (jj - one)) * prev[j - 1];
            }
            next[n] = (nn * a_ - one) * prev[n - 1];
            rows_.push_back(std::move(next));
        }
    }

    int n_max() const { return static_cast<int>(rows_.size()); }
    const T& q() const { return q_; }
    const T& a() const { return a_; }

    /// b^n_j; 1 <= n <= n_max, 0 <= j <= n-1.
    const T& at(int n, int j) const {
        if (n < 1 || n > n_max() || j < 0 || j > n - 1) {
            throw DomainError("b_table: index (" + std::to_string(n) + ", " + std::to_string(j) +
                              ") out of range");
        }
        return rows_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j)];
    }

    const std::vector<T>& row(int n) const {
        if (n < 1 || n > n_max()) {
            throw DomainError("b_table: row " + std::to_string(n) + " out of range");
        }
        return rows_[static_cast<std::size_t>(n - 1)];
    }

private:
    T q_;
    T a_;
    std::vector<std::vector<T>> rows_;
};

using CoefficientTable = BasicCoefficientTable<double>;
using ExactCoefficientTable = BasicCoefficientTable<Rational>;

CoefficientTable b_table(const DeformationParams& params, int n_max);
ExactCoefficientTable b_table_exact(const Rational& q, const Rational& a, int n_max);

double exp_qa_nth_derivative(double tau, const DeformationParams& params, int n);

/// Same, reusing a precomputed table (n <= table.n_max()).
double exp_qa_nth_derivative(double tau, const DeformationParams& params,
                             const CoefficientTable& table, int n);

}  // namespace deformed
}  // namespace qgeom

#endif  // QGEOM_DEFORMED_HPP
