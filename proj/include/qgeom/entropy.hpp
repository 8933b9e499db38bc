#ifndef QGEOM_ENTROPY_HPP
#define QGEOM_ENTROPY_HPP

// Escort expectations and the (q,a) entropy triple on q-Gaussians:
//   d_{q,a}(p, r) = (1/a) int (-l_r)^a (-l_p)^{1-a} p^q dx,
//   Ent_{q,a}(p)  = d_{q,a}(p, p),
//   D^{(q,a)}(p, r) = d_{q,a}(p, r) - d_{q,a}(p, p).

#include <functional>
#include <span>
#include <vector>

#include "qgeom/deformed.hpp"
#include "qgeom/numerics.hpp"
#include "qgeom/q_gaussian.hpp"

namespace qgeom::entropy {

/// int f(x) / ell'(p(x)) dx. Where the density underflows to zero the weight
/// is taken as zero.
IntegralEstimate generic_escort_expectation(const std::function<double(double)>& f,
                                            const std::function<double(double)>& ell_prime,
                                            const QGaussian& model,
                                            const QuadratureConfig& config);

/// E_{nu_{q,a;xi}}[f].
IntegralEstimate escort_expectation(const std::function<double(double)>& f,
                                    const DeformationParams& params, const LocationScale& xi,
                                    const QuadratureConfig& config);

IntegralEstimate cross_entropy_estimate(const DeformationParams& params,
                                        const LocationScale& xi_p, const LocationScale& xi_r,
                                        const QuadratureConfig& config);

/// The value-returning operations below throw NumericalError when the
/// quadrature does not converge.
double cross_entropy(const DeformationParams& params, const LocationScale& xi_p,
                     const LocationScale& xi_r, const QuadratureConfig& config = {});

IntegralEstimate entropy_estimate(const DeformationParams& params, const LocationScale& xi,
                                  const QuadratureConfig& config);

double entropy(const DeformationParams& params, const LocationScale& xi,
               const QuadratureConfig& config = {});

/// Ent_{q,1} without quadrature: (1/2) log(2 pi e sigma^2) at q = 1,
/// (1 - int p^q dx)/(q - 1) for q > 1 with int p^q = Phi(q,1,0,0).
double tsallis_entropy_closed(double q, const LocationScale& xi);

struct EntropyReport {
    double cross = 0.0;
    double self = 0.0;
    double relative = 0.0;
    IntegralEstimate cross_estimate;
    IntegralEstimate self_estimate;

    bool converged() const { return cross_estimate.converged && self_estimate.converged; }
    double error_estimate() const {
        return cross_estimate.abs_error_estimate + self_estimate.abs_error_estimate;
    }
};

EntropyReport entropy_report(const DeformationParams& params, const LocationScale& xi_p,
                             const LocationScale& xi_r, const QuadratureConfig& config);

double relative_entropy(const DeformationParams& params, const LocationScale& xi_p,
                        const LocationScale& xi_r, const QuadratureConfig& config = {});

/// Residuals of D^{(q,1)} - lambda D^{(q,a)} at one reference scale, each
/// divided by -ln_q(1/(Z_q sigma_r)).
struct GaugeSweepPoint {
    double sigma_r = 0.0;
    double divergence_unit = 0.0;     // D^{(q,1)}(p, r)
    double divergence_refined = 0.0;  // D^{(q,a)}(p, r)
    double error_estimate = 0.0;      // combined quadrature error of the two divergences
    double normalizer = 0.0;          // -ln_q(1/(Z_q sigma_r))
    std::vector<double> residuals;    // one per lambda in GaugeReport::lambdas
};

struct GaugeReport {
    double q = 0.0;
    double a = 0.0;
    double entropy_unit = 0.0;     // Ent_{q,1}(p)
    double entropy_refined = 0.0;  // Ent_{q,a}(p)
    double entropy_residual = 0.0; // |a Ent_{q,a} - Ent_{q,1}|
    std::vector<double> lambdas;
    std::vector<GaugeSweepPoint> sweep;

    // lambda* = D^{(q,1)}/D^{(q,a)} at the fit scale (first sweep entry);
    // separation = normalized |residual| at the far scale (last sweep entry)
    // over the normalized fit residual, floored at its quadrature error.
    double fitted_lambda = 0.0;
    double fit_residual = 0.0;
    double far_residual = 0.0;
    double separation = 0.0;
    bool converged = true;
};

/// Reference scales used when the caller does not supply a sweep:
/// sigma_r * {1, 2, 4, 10}.
std::vector<double> default_gauge_sweep(double sigma_r);

GaugeReport gauge_report(double q, double a, const LocationScale& xi_p,
                         const LocationScale& xi_r, std::span<const double> lambda_grid,
                         const QuadratureConfig& config = {});

GaugeReport gauge_report(double q, double a, const LocationScale& xi_p,
                         const LocationScale& xi_r, std::span<const double> lambda_grid,
                         std::span<const double> sigma_sweep, const QuadratureConfig& config);

}  // namespace qgeom::entropy

#endif  // QGEOM_ENTROPY_HPP
