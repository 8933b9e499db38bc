#include "qgeom/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qgeom/error.hpp"
#include "qgeom/geometry.hpp"

namespace qgeom::entropy {

namespace {

void require_converged(const IntegralEstimate& est, const char* op) {
    if (!est.converged) {
        std::ostringstream os;
        os.precision(6);
        os << op << ": quadrature did not converge (value " << est.value << ", error estimate "
           << est.abs_error_estimate << ", " << est.evaluations << " evaluations)";
        throw NumericalError(os.str());
    }
}

QGaussian model_for(const DeformationParams& params, const LocationScale& xi) {
    return QGaussian(params.q(), xi);
}

// Escort expectation of exp(log_f). Far in heavy tails f can overflow while
// the escort weight underflows, so the product is formed in log space.
IntegralEstimate escort_expectation_log(const std::function<double(double)>& log_f,
                                        const DeformationParams& params, const LocationScale& xi,
                                        const QuadratureConfig& config) {
    const gaussian::LikelihoodKernel kernel(model_for(params, xi));
    const double q = params.q();
    const double a = params.a();
    auto integrand = [&](double x) {
        return std::exp(log_f(x) + (1.0 - a) * kernel.log_neg_likelihood(x) +
                        q * kernel.log_density(x));
    };
    return numerics::integrate_real_line(integrand, config.centered(xi.mu, xi.sigma));
}

}  // namespace

IntegralEstimate generic_escort_expectation(const std::function<double(double)>& f,
                                            const std::function<double(double)>& ell_prime,
                                            const QGaussian& model,
                                            const QuadratureConfig& config) {
    auto integrand = [&](double x) {
        const double p = gaussian::density(model, x);
        if (p == 0.0) {
            return 0.0;
        }
        return f(x) / ell_prime(p);
    };
    return numerics::integrate_real_line(integrand, config.centered(model.mu(), model.sigma()));
}

IntegralEstimate escort_expectation(const std::function<double(double)>& f,
                                    const DeformationParams& params, const LocationScale& xi,
                                    const QuadratureConfig& config) {
    const QGaussian model = model_for(params, xi);
    const gaussian::LikelihoodKernel kernel(model);
    const double q = params.q();
    const double a = params.a();
    auto integrand = [&](double x) {
        const double weight =
            std::exp((1.0 - a) * kernel.log_neg_likelihood(x) + q * kernel.log_density(x));
        // Skipping f where the weight underflows avoids 0 * inf in the tails.
        return weight == 0.0 ? 0.0 : f(x) * weight;
    };
    return numerics::integrate_real_line(integrand, config.centered(xi.mu, xi.sigma));
}

IntegralEstimate cross_entropy_estimate(const DeformationParams& params,
                                        const LocationScale& xi_p, const LocationScale& xi_r,
                                        const QuadratureConfig& config) {
    const gaussian::LikelihoodKernel kernel_r(model_for(params, xi_r));
    const double a = params.a();
    // -ln_{q,a}(r(x)) = (1/a)(-l_r(x))^a
    auto log_neg_log_r = [&](double x) { return a * kernel_r.log_neg_likelihood(x) - std::log(a); };
    return escort_expectation_log(log_neg_log_r, params, xi_p, config);
}

double cross_entropy(const DeformationParams& params, const LocationScale& xi_p,
                     const LocationScale& xi_r, const QuadratureConfig& config) {
    const IntegralEstimate est = cross_entropy_estimate(params, xi_p, xi_r, config);
    require_converged(est, "cross_entropy");
    return est.value;
}

IntegralEstimate entropy_estimate(const DeformationParams& params, const LocationScale& xi,
                                  const QuadratureConfig& config) {
    return cross_entropy_estimate(params, xi, xi, config);
}

double entropy(const DeformationParams& params, const LocationScale& xi,
               const QuadratureConfig& config) {
    const IntegralEstimate est = entropy_estimate(params, xi, config);
    require_converged(est, "entropy");
    return est.value;
}

double tsallis_entropy_closed(double q, const LocationScale& xi) {
    if (!(q >= 1.0 - kQOneTolerance && q < 3.0)) {
        throw DomainError("tsallis_entropy_closed: requires 1 <= q < 3");
    }
    if (is_q_one(q)) {
        return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * xi.sigma * xi.sigma);
    }
    const double mass_q = geometry::phi_moment_closed(q, 1, 0, xi);
    return (1.0 - mass_q) / (q - 1.0);
}

EntropyReport entropy_report(const DeformationParams& params, const LocationScale& xi_p,
                             const LocationScale& xi_r, const QuadratureConfig& config) {
    EntropyReport report;
    report.cross_estimate = cross_entropy_estimate(params, xi_p, xi_r, config);
    report.self_estimate = entropy_estimate(params, xi_p, config);
    report.cross = report.cross_estimate.value;
    report.self = report.self_estimate.value;
    report.relative = report.cross - report.self;
    return report;
}

double relative_entropy(const DeformationParams& params, const LocationScale& xi_p,
                        const LocationScale& xi_r, const QuadratureConfig& config) {
    const EntropyReport report = entropy_report(params, xi_p, xi_r, config);
    require_converged(report.cross_estimate, "relative_entropy");
    require_converged(report.self_estimate, "relative_entropy");
    return report.relative;
}

std::vector<double> default_gauge_sweep(double sigma_r) {
    return {sigma_r, 2.0 * sigma_r, 4.0 * sigma_r, 10.0 * sigma_r};
}

GaugeReport gauge_report(double q, double a, const LocationScale& xi_p,
                         const LocationScale& xi_r, std::span<const double> lambda_grid,
                         const QuadratureConfig& config) {
    const std::vector<double> sweep = default_gauge_sweep(xi_r.sigma);
    return gauge_report(q, a, xi_p, xi_r, lambda_grid, sweep, config);
}

GaugeReport gauge_report(double q, double a, const LocationScale& xi_p,
                         const LocationScale& xi_r, std::span<const double> lambda_grid,
                         std::span<const double> sigma_sweep, const QuadratureConfig& config) {
    if (sigma_sweep.size() < 2) {
        throw DomainError("gauge_report: sigma sweep needs a fit scale and a far scale");
    }
    const DeformationParams unit(q, 1.0);
    const DeformationParams refined(q, a);

    GaugeReport report;
    report.q = q;
    report.a = a;
    report.lambdas.assign(lambda_grid.begin(), lambda_grid.end());

    const IntegralEstimate ent_unit = entropy_estimate(unit, xi_p, config);
    const IntegralEstimate ent_refined = entropy_estimate(refined, xi_p, config);
    report.entropy_unit = ent_unit.value;
    report.entropy_refined = ent_refined.value;
    report.entropy_residual = std::abs(a * ent_refined.value - ent_unit.value);
    report.converged = ent_unit.converged && ent_refined.converged;

    for (const double sigma_r : sigma_sweep) {
        const LocationScale r(xi_r.mu, sigma_r);
        const EntropyReport d_unit = entropy_report(unit, xi_p, r, config);
        const EntropyReport d_refined = entropy_report(refined, xi_p, r, config);
        report.converged = report.converged && d_unit.converged() && d_refined.converged();

        GaugeSweepPoint point;
        point.sigma_r = sigma_r;
        point.divergence_unit = d_unit.relative;
        point.divergence_refined = d_refined.relative;
        point.error_estimate = d_unit.error_estimate() + d_refined.error_estimate();
        point.normalizer = -deformed::ln_q(1.0 / (gaussian::normalization_Z(q) * sigma_r), q);
        for (const double lambda : report.lambdas) {
            point.residuals.push_back(
                (point.divergence_unit - lambda * point.divergence_refined) / point.normalizer);
        }
        report.sweep.push_back(std::move(point));
    }

    const GaugeSweepPoint& fit = report.sweep.front();
    const GaugeSweepPoint& far = report.sweep.back();
    report.fitted_lambda = fit.divergence_unit / fit.divergence_refined;
    const double lambda = report.fitted_lambda;
    const double fit_noise = (std::abs(lambda) + 1.0) * fit.error_estimate / fit.normalizer;
    report.fit_residual =
        std::abs(fit.divergence_unit - lambda * fit.divergence_refined) / fit.normalizer;
    report.far_residual =
        std::abs(far.divergence_unit - lambda * far.divergence_refined) / far.normalizer;
    report.separation =
        report.far_residual / std::max({report.fit_residual, fit_noise,
                                        std::numeric_limits<double>::min()});
    return report;
}

}  // namespace qgeom::entropy
