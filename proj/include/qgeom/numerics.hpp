#ifndef QGEOM_NUMERICS_HPP
#define QGEOM_NUMERICS_HPP

#include <cstddef>
#include <functional>

namespace qgeom {

/// Result of a quadrature call. converged implies
/// abs_error_estimate <= max(abs_tol, rel_tol * |value|).
struct IntegralEstimate {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::size_t max_evaluations = 200000;
    /// The real line is split at center; scale sets the width of the
    /// cotangent map on each half-line.
    double center = 0.0;
    double scale = 1.0;

    /// Throws DomainError on nonpositive tolerances/scale or a budget below
    /// the initial panel set.
    void validate() const;

    QuadratureConfig centered(double new_center, double new_scale) const {
        QuadratureConfig copy = *this;
        copy.center = new_center;
        copy.scale = new_scale;
        return copy;
    }
};

namespace numerics {

/// Evaluations spent on the initial panel set of integrate_real_line.
std::size_t minimum_evaluations();

double log_gamma(double s);
double beta(double s, double t);

/// (2k-1)!! with (-1)!! = 1.
double double_factorial_odd(int k);

/// Integral of f over the real line. Each half-line is mapped onto
/// (0, pi/2] by x = center +- scale * cot(theta), then refined with
/// adaptive 21-point Gauss-Kronrod panels until the global error estimate
/// meets the tolerance or the evaluation budget runs out. A NaN from f
/// throws NumericalError.
IntegralEstimate integrate_real_line(const std::function<double(double)>& f,
                                     const QuadratureConfig& config);

/// Adaptive Gauss-Kronrod on a finite interval [lo, hi].
IntegralEstimate integrate_interval(const std::function<double(double)>& f, double lo,
                                    double hi, const QuadratureConfig& config);

/// Central-difference estimate of f^{(order)}(x), order in {1, 2, 3}.
double finite_difference(const std::function<double(double)>& f, double x, int order,
                         double step);

/// Step eps^{1/(order+2)} * scale, eps = machine epsilon.
double default_step(int order, double scale = 1.0);

}  // namespace numerics
}  // namespace qgeom

#endif  // QGEOM_NUMERICS_HPP
