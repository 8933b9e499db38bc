#include "qgeom/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qgeom/error.hpp"

namespace qgeom {

std::string_view to_string(Method method) {
    return method == Method::closed_form ? "closed_form" : "quadrature";
}

double MetricTensor::component(Coordinate s, Coordinate t) const {
    if (s == Coordinate::mu && t == Coordinate::mu) {
        return g_mumu;
    }
    if (s == Coordinate::sigma && t == Coordinate::sigma) {
        return g_sigmasigma;
    }
    return g_musigma;
}

double CubicTensor::operator()(Coordinate s, Coordinate t, Coordinate u) const {
    const int sigmas = (s == Coordinate::sigma) + (t == Coordinate::sigma) + (u == Coordinate::sigma);
    return by_sigma_count[static_cast<std::size_t>(sigmas)];
}

namespace geometry {

namespace {

constexpr double kConditioningRatio = 1e-3;
// Beyond this L = log(Z_1 sigma) the upward recursion for I_k loses too
// many digits; quadrature takes over.
constexpr double kMaxGaussianL = 8.0;

void require_q_range(double q, const char* op) {
    if (!(q >= 1.0 - kQOneTolerance && q < 3.0)) {
        std::ostringstream os;
        os << op << ": requires 1 <= q < 3, got q = " << q;
        throw DomainError(os.str());
    }
}

void require_moment_indices(int n, int k, int j, const char* op) {
    if (n < 1 || k < 0 || k > n || j < 0) {
        std::ostringstream os;
        os << op << ": need n >= 1, 0 <= k <= n, j >= 0 (got n = " << n << ", k = " << k
           << ", j = " << j << ")";
        throw DomainError(os.str());
    }
}

double moment_exponent(double q, int n) { return static_cast<double>(n - 1) * (q - 1.0) + q; }

// e^{x^2} erfc(x) for x >= 0.
double scaled_erfc(double x) {
    if (x < 25.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    const double inv2 = 1.0 / (2.0 * x * x);
    const double series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2;
    return series / (x * std::sqrt(std::numbers::pi));
}

// Chain rule: d_s ln_{q,a}(p) = (-l)^{a-1} d_s l.
double refined_partial(double neg_l, double a, const gaussian::LikelihoodGradient& grad,
                       Coordinate c) {
    const double dl = c == Coordinate::mu ? grad.d_mu : grad.d_sigma;
    return std::pow(neg_l, a - 1.0) * dl;
}

bool near_boundary(double q, const LocationScale& xi) {
    return pole_radius(q, xi.sigma).r < kConditioningRatio * xi.sigma;
}

QuadratureConfig around(const QuadratureConfig& config, const LocationScale& xi) {
    return config.centered(xi.mu, xi.sigma);
}

}  // namespace

double phi_moment_closed(double q, int n, int k, const LocationScale& xi) {
    require_q_range(q, "phi_moment_closed");
    require_moment_indices(n, k, 0, "phi_moment_closed");
    if (is_q_one(q)) {
        return numerics::double_factorial_odd(k);
    }
    if (!gaussian::power_moment_integrable(q, n, k)) {
        throw IntegrabilityError("phi_moment_closed: moment not integrable");
    }
    const double z_sigma = gaussian::normalization_Z(q) * xi.sigma;
    const double ratio = (3.0 - q) / (q - 1.0);
    return xi.sigma / std::pow(z_sigma, moment_exponent(q, n)) * std::pow(ratio, k + 0.5) *
           numerics::beta((3.0 - q) / (2.0 * (q - 1.0)) + n - k, 0.5 + k);
}

double phi_gaussian_j1_closed(int k, const LocationScale& xi) {
    if (k < 0) {
        throw DomainError("phi_gaussian_j1_closed: k must be >= 0");
    }
    const double log_zs = std::log(gaussian::normalization_Z(1.0) * xi.sigma);
    if (!(log_zs > 0.0)) {
        throw DomainError("phi_gaussian_j1_closed: sigma not in Sigma_1");
    }
    const double root = std::sqrt(log_zs);
    double i_k = std::numbers::pi * scaled_erfc(root) / root;
    for (int i = 1; i <= k; ++i) {
        i_k = std::tgamma(i - 0.5) - log_zs * i_k;
    }
    return std::pow(2.0, k) / std::sqrt(std::numbers::pi) * i_k;
}

double phi_residue_formula(double q, int k, const LocationScale& xi) {
    require_q_range(q, "phi_residue_formula");
    const double z_sigma = gaussian::normalization_Z(q) * xi.sigma;
    const double r = pole_radius(q, xi.sigma).r;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return sign * std::numbers::pi * std::pow(z_sigma, 1.0 - q) * (3.0 - q) *
           std::pow(r, 2.0 * k - 1.0) / std::pow(xi.sigma, 2.0 * (k - 1));
}

IntegralEstimate phi_moment_quadrature(double q, int n, int k, int j, const LocationScale& xi,
                                       const QuadratureConfig& config) {
    require_q_range(q, "phi_moment_quadrature");
    require_moment_indices(n, k, j, "phi_moment_quadrature");
    if (!gaussian::power_moment_integrable(q, n, k)) {
        throw IntegrabilityError("phi_moment_quadrature: moment not integrable");
    }
    const gaussian::LikelihoodKernel kernel(QGaussian(q, xi));
    const double m = moment_exponent(q, n);
    auto integrand = [&](double x) {
        const double p = kernel.density(x);
        if (p == 0.0) {
            return 0.0;
        }
        const double u2 = std::pow(kernel.standardized(x), 2);
        return std::pow(u2, k) * std::pow(p, m) / std::pow(kernel.neg_likelihood(x), j);
    };
    return numerics::integrate_real_line(integrand, around(config, xi));
}

PhiResult phi_moment_result(double q, int n, int k, int j, const LocationScale& xi,
                            const QuadratureConfig& config) {
    require_q_range(q, "phi_moment");
    require_moment_indices(n, k, j, "phi_moment");
    gaussian::require_sigma_q(QGaussian(q, xi), "phi_moment");
    if (!gaussian::power_moment_integrable(q, n, k)) {
        throw IntegrabilityError("phi_moment: u^{2k} p^{(n-1)(q-1)+q} not integrable");
    }
    PhiResult out;
    if (j == 0) {
        out.value = phi_moment_closed(q, n, k, xi);
        return out;
    }
    if (j == 1 && is_q_one(q) &&
        std::log(gaussian::normalization_Z(1.0) * xi.sigma) <= kMaxGaussianL) {
        out.value = phi_gaussian_j1_closed(k, xi);
        return out;
    }
    const IntegralEstimate est = phi_moment_quadrature(q, n, k, j, xi, config);
    out.value = est.value;
    out.error_estimate = est.abs_error_estimate;
    out.method = Method::quadrature;
    out.converged = est.converged;
    return out;
}

double phi_moment(double q, int n, int k, int j, const LocationScale& xi,
                  const QuadratureConfig& config) {
    const PhiResult result = phi_moment_result(q, n, k, j, xi, config);
    if (!result.converged) {
        throw NumericalError("phi_moment: quadrature did not converge");
    }
    return result.value;
}

PoleRadius pole_radius(double q, double sigma) {
    require_q_range(q, "pole_radius");
    const QGaussian model(q, LocationScale(0.0, sigma));
    gaussian::require_sigma_q(model, "pole_radius");
    const double z_sigma = model.z_sigma();
    const double neg_peak = -deformed::ln_q(1.0 / z_sigma, q);
    const double r2 = neg_peak * std::pow(z_sigma, 1.0 - q) * (3.0 - q) * sigma * sigma;
    return {std::sqrt(r2), q, sigma};
}

QuadratureConfig assembly_quadrature_config() {
    QuadratureConfig config;
    config.abs_tol = 1e-15;
    config.rel_tol = 1e-12;
    return config;
}

MetricTensor metric_quadrature(const DeformationParams& params, const LocationScale& xi,
                               const QuadratureConfig& config) {
    const QGaussian model(params.q(), xi);
    gaussian::require_sigma_qa(params, model, "metric_quadrature");
    const gaussian::LikelihoodKernel kernel(model);
    const deformed::CoefficientTable table = deformed::b_table(params, 2);
    const double a = params.a();

    auto component = [&](Coordinate s, Coordinate t) {
        auto integrand = [&](double x) {
            const double neg_l = kernel.neg_likelihood(x);
            const double tau = -std::pow(neg_l, a) / a;
            const gaussian::LikelihoodGradient grad = kernel.gradient(x);
            const double second = deformed::exp_qa_nth_derivative(tau, params, table, 2);
            if (second == 0.0) {
                return 0.0;
            }
            return refined_partial(neg_l, a, grad, s) * refined_partial(neg_l, a, grad, t) * second;
        };
        return numerics::integrate_real_line(integrand, around(config, xi));
    };

    const IntegralEstimate mumu = component(Coordinate::mu, Coordinate::mu);
    const IntegralEstimate musigma = component(Coordinate::mu, Coordinate::sigma);
    const IntegralEstimate sigmasigma = component(Coordinate::sigma, Coordinate::sigma);

    MetricTensor g;
    g.g_mumu = mumu.value;
    g.g_musigma = musigma.value;
    g.g_sigmasigma = sigmasigma.value;
    g.params = params;
    g.xi = xi;
    g.method = Method::quadrature;
    g.error_estimates = {mumu.abs_error_estimate, musigma.abs_error_estimate,
                         sigmasigma.abs_error_estimate};
    g.converged = mumu.converged && musigma.converged && sigmasigma.converged;
    g.conditioning_warning = near_boundary(params.q(), xi);
    return g;
}

MetricTensor metric_closed(const DeformationParams& params, const LocationScale& xi,
                           const QuadratureConfig& config) {
    const QGaussian model(params.q(), xi);
    gaussian::require_sigma_qa(params, model, "metric_closed");
    const double q = params.q();
    const deformed::CoefficientTable table = deformed::b_table(params, 2);
    const double g2 = 1.0 / (std::pow(model.z_sigma(), 2.0 * (1.0 - q)) * xi.sigma * xi.sigma);

    MetricTensor g;
    g.params = params;
    g.xi = xi;
    g.method = Method::closed_form;
    for (int j = 0; j <= 1; ++j) {
        const double b = table.at(2, j);
        if (b == 0.0) {
            continue;
        }
        const PhiResult phi0 = phi_moment_result(q, 2, 0, j, xi, config);
        const PhiResult phi1 = phi_moment_result(q, 2, 1, j, xi, config);
        const PhiResult phi2 = phi_moment_result(q, 2, 2, j, xi, config);
        const double mu_coeff = 4.0 / ((3.0 - q) * (3.0 - q)) * b * g2;
        const double sigma_coeff = b * g2;
        g.g_mumu += mu_coeff * phi1.value;
        g.g_sigmasigma += sigma_coeff * (phi0.value - 2.0 * phi1.value + phi2.value);
        g.error_estimates[0] += std::abs(mu_coeff) * phi1.error_estimate;
        g.error_estimates[2] += std::abs(sigma_coeff) * (phi0.error_estimate +
                                                          2.0 * phi1.error_estimate +
                                                          phi2.error_estimate);
        g.converged = g.converged && phi0.converged && phi1.converged && phi2.converged;
    }
    g.conditioning_warning = near_boundary(q, xi);
    return g;
}

MetricTensor metric_two_term(const DeformationParams& params, const LocationScale& xi,
                          SigmaCoefficient coefficient) {
    const QGaussian model(params.q(), xi);
    gaussian::require_sigma_qa(params, model, "metric_two_term");
    const double q = params.q();
    const double sigma = xi.sigma;
    const deformed::CoefficientTable refined = deformed::b_table(params, 2);
    const deformed::CoefficientTable unit = deformed::b_table(DeformationParams(q, 1.0), 2);
    const double b0 = refined.at(2, 0);
    const double b1 = refined.at(2, 1);
    const double b0_unit = unit.at(2, 0);
    const double b1_sigma = coefficient == SigmaCoefficient::corrected ? b1 : unit.at(2, 1);
    const double zs_pow = std::pow(model.z_sigma(), 1.0 - q);
    const double r = pole_radius(q, sigma).r;
    const double pi = std::numbers::pi;

    MetricTensor g;
    g.params = params;
    g.xi = xi;
    g.method = Method::closed_form;
    g.g_mumu = b0 / (b0_unit * sigma * sigma) -
               4.0 / (3.0 - q) * pi * b1 / (zs_pow * sigma * sigma) * r;
    const double bump = 1.0 + (r / sigma) * (r / sigma);
    g.g_sigmasigma = (3.0 - q) * b0 / (b0_unit * sigma * sigma) +
                     pi * (3.0 - q) * b1_sigma / (zs_pow * r) * bump * bump;
    g.conditioning_warning = r < kConditioningRatio * sigma;
    return g;
}

namespace {

struct RhoEvaluator {
    DeformationParams params;
    QGaussian model1;
    QGaussian model2;
    gaussian::LikelihoodKernel kernel2;
    deformed::CoefficientTable table;

    RhoEvaluator(const DeformationParams& p, const LocationScale& xi1, const LocationScale& xi2)
        : params(p),
          model1(p.q(), xi1),
          model2(p.q(), xi2),
          kernel2(model2),
          table(deformed::b_table(p, 1)) {
        gaussian::require_sigma_q(model1, "relative_entropy_integrand");
    }

    double operator()(double x) const {
        const double p1 = gaussian::density(model1, x);
        if (p1 == 0.0) {
            return 0.0;
        }
        const double p2 = gaussian::density(model2, x);
        const double log1 = deformed::ln_qa(p1, params);
        // Only an underflowed Gaussian tail needs the closed form for ln_{q,a}(p2).
        const double log2 = p2 > 0.0 ? deformed::ln_qa(p2, params)
                                     : -std::pow(kernel2.neg_likelihood(x), params.a()) / params.a();
        return (log1 - log2) * deformed::exp_qa_nth_derivative(log1, params, table, 1);
    }
};

}  // namespace

double relative_entropy_integrand(const DeformationParams& params, const LocationScale& xi1,
                                  const LocationScale& xi2, double x) {
    return RhoEvaluator(params, xi1, xi2)(x);
}

IntegralEstimate relative_entropy_by_integrand(const DeformationParams& params,
                                               const LocationScale& xi1,
                                               const LocationScale& xi2,
                                               const QuadratureConfig& config) {
    const RhoEvaluator rho(params, xi1, xi2);
    return numerics::integrate_real_line(rho, around(config, xi1));
}

double HessianCheck::max_residual() const {
    return std::max({residual_mumu, residual_musigma, residual_sigmasigma});
}

HessianCheck metric_hessian_check(const DeformationParams& params, const LocationScale& xi,
                                  const QuadratureConfig& config) {
    const double q = params.q();
    const double a = params.a();
    const double h = 1e-3 * xi.sigma;

    auto shifted = [&](Coordinate c, double sign) {
        return c == Coordinate::mu ? LocationScale(xi.mu + sign * h, xi.sigma)
                                   : LocationScale(xi.mu, xi.sigma + sign * h);
    };
    auto kernel_at = [&](const LocationScale& at) {
        const QGaussian model(q, at);
        gaussian::require_sigma_qa(params, model, "metric_hessian_check");
        return gaussian::LikelihoodKernel(model);
    };

    // rho = (1/a) [(-l_2)^a - (-l_1)^a] (-l_1)^{1-a} p_1^q, closed-form kernels.
    auto rho = [a, q](const gaussian::LikelihoodKernel& k1, const gaussian::LikelihoodKernel& k2,
                      double x) {
        const double p1 = k1.density(x);
        if (p1 == 0.0) {
            return 0.0;
        }
        const double n1 = k1.neg_likelihood(x);
        const double n2 = k2.neg_likelihood(x);
        return (std::pow(n2, a) - std::pow(n1, a)) / a * std::pow(n1, 1.0 - a) * std::pow(p1, q);
    };

    auto mixed = [&](Coordinate s, Coordinate t) {
        const gaussian::LikelihoodKernel k1p = kernel_at(shifted(s, +1.0));
        const gaussian::LikelihoodKernel k1m = kernel_at(shifted(s, -1.0));
        const gaussian::LikelihoodKernel k2p = kernel_at(shifted(t, +1.0));
        const gaussian::LikelihoodKernel k2m = kernel_at(shifted(t, -1.0));
        auto stencil = [&](double x) {
            return (rho(k1p, k2p, x) - rho(k1p, k2m, x) - rho(k1m, k2p, x) + rho(k1m, k2m, x)) /
                   (4.0 * h * h);
        };
        return numerics::integrate_real_line(stencil, around(config, xi));
    };

    HessianCheck check;
    const IntegralEstimate mm = mixed(Coordinate::mu, Coordinate::mu);
    const IntegralEstimate ms = mixed(Coordinate::mu, Coordinate::sigma);
    const IntegralEstimate ss = mixed(Coordinate::sigma, Coordinate::sigma);
    check.mixed_mumu = mm.value;
    check.mixed_musigma = ms.value;
    check.mixed_sigmasigma = ss.value;
    check.metric = metric_quadrature(params, xi, config);
    check.residual_mumu = std::abs(-check.mixed_mumu - check.metric.g_mumu);
    check.residual_musigma = std::abs(-check.mixed_musigma - check.metric.g_musigma);
    check.residual_sigmasigma = std::abs(-check.mixed_sigmasigma - check.metric.g_sigmasigma);
    check.converged = mm.converged && ms.converged && ss.converged && check.metric.converged;
    return check;
}

CubicTensor cubic_tensor(const DeformationParams& params, const LocationScale& xi,
                         const QuadratureConfig& config) {
    const QGaussian model(params.q(), xi);
    gaussian::require_sigma_qa(params, model, "cubic_tensor");
    const double q = params.q();
    const deformed::CoefficientTable table = deformed::b_table(params, 3);
    const double g = 1.0 / (std::pow(model.z_sigma(), 1.0 - q) * xi.sigma);
    const double mu_factor = 2.0 / (3.0 - q) * g;  // d_mu l = mu_factor * u
    const double sigma_factor = -g;                 // d_sigma l = sigma_factor * (1 - u^2)

    CubicTensor c;
    c.params = params;
    c.xi = xi;
    c.method = Method::closed_form;
    double mumusigma = 0.0;
    double sigmas = 0.0;
    for (int j = 0; j <= 2; ++j) {
        const double b = table.at(3, j);
        if (b == 0.0) {
            continue;
        }
        std::array<PhiResult, 4> phi;
        for (int k = 0; k <= 3; ++k) {
            phi[static_cast<std::size_t>(k)] = phi_moment_result(q, 3, k, j, xi, config);
            c.converged = c.converged && phi[static_cast<std::size_t>(k)].converged;
        }
        const double c1 = b * mu_factor * mu_factor * sigma_factor;
        const double c3 = b * sigma_factor * sigma_factor * sigma_factor;
        mumusigma += c1 * (phi[1].value - phi[2].value);
        sigmas += c3 * (phi[0].value - 3.0 * phi[1].value + 3.0 * phi[2].value - phi[3].value);
        c.error_estimates[1] += std::abs(c1) * (phi[1].error_estimate + phi[2].error_estimate);
        c.error_estimates[3] += std::abs(c3) * (phi[0].error_estimate + 3.0 * phi[1].error_estimate +
                                                3.0 * phi[2].error_estimate + phi[3].error_estimate);
    }
    c.by_sigma_count = {0.0, mumusigma, 0.0, sigmas};
    c.conditioning_warning = near_boundary(q, xi);
    return c;
}

IntegralEstimate cubic_component_quadrature(const DeformationParams& params,
                                            const LocationScale& xi, Coordinate s,
                                            Coordinate t, Coordinate u,
                                            const QuadratureConfig& config) {
    const QGaussian model(params.q(), xi);
    gaussian::require_sigma_qa(params, model, "cubic_component_quadrature");
    const gaussian::LikelihoodKernel kernel(model);
    const deformed::CoefficientTable table = deformed::b_table(params, 3);
    const double a = params.a();
    auto integrand = [&](double x) {
        const double neg_l = kernel.neg_likelihood(x);
        const double tau = -std::pow(neg_l, a) / a;
        const double third = deformed::exp_qa_nth_derivative(tau, params, table, 3);
        if (third == 0.0) {
            return 0.0;
        }
        const gaussian::LikelihoodGradient grad = kernel.gradient(x);
        double product = refined_partial(neg_l, a, grad, s);
        product *= refined_partial(neg_l, a, grad, t);
        product *= refined_partial(neg_l, a, grad, u);
        return product * third;
    };
    return numerics::integrate_real_line(integrand, around(config, xi));
}

CubicTensor cubic_tensor_quadrature(const DeformationParams& params, const LocationScale& xi,
                                    const QuadratureConfig& config) {
    using C = Coordinate;
    const std::array<std::array<C, 3>, 4> triples = {{{C::mu, C::mu, C::mu},
                                                      {C::mu, C::mu, C::sigma},
                                                      {C::mu, C::sigma, C::sigma},
                                                      {C::sigma, C::sigma, C::sigma}}};
    CubicTensor c;
    c.params = params;
    c.xi = xi;
    c.method = Method::quadrature;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const IntegralEstimate est = cubic_component_quadrature(
            params, xi, triples[i][0], triples[i][1], triples[i][2], config);
        c.by_sigma_count[i] = est.value;
        c.error_estimates[i] = est.abs_error_estimate;
        c.converged = c.converged && est.converged;
    }
    c.conditioning_warning = near_boundary(params.q(), xi);
    return c;
}

}  // namespace geometry
}  // namespace qgeom
