#include "qgeom/q_gaussian.hpp"

#include <numbers>
#include <sstream>
#include <string>

#include "qgeom/numerics.hpp"

namespace qgeom {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool q_in_escort_range(double q) { return q >= 1.0 - kQOneTolerance && q < 3.0; }

}  // namespace

QGaussian::QGaussian(double q, LocationScale xi) : q_(q), xi_(xi), z_(0.0) {
    if (!std::isfinite(q) || q > kMaxQ) {
        throw DomainError("QGaussian: q = " + fmt(q) + " must be finite and at most " + fmt(kMaxQ));
    }
    z_ = gaussian::normalization_Z(q);
}

namespace gaussian {

double normalization_Z(double q) {
    if (!(q < 3.0)) {
        throw DomainError("normalization_Z: integral diverges for q >= 3 (q = " + fmt(q) + ")");
    }
    if (is_q_one(q)) {
        return std::sqrt(2.0 * std::numbers::pi);
    }
    if (q > 1.0) {
        return std::sqrt((3.0 - q) / (q - 1.0)) *
               numerics::beta((3.0 - q) / (2.0 * (q - 1.0)), 0.5);
    }
    return std::sqrt((3.0 - q) / (1.0 - q)) * numerics::beta((2.0 - q) / (1.0 - q), 0.5);
}

double density(const QGaussian& model, double x) {
    const double u = (x - model.mu()) / model.sigma();
    return deformed::rexp_q(-u * u / (3.0 - model.q()), model.q()) / model.z_sigma();
}

void require_sigma_q(const QGaussian& model, const char* op) {
    if (!q_in_escort_range(model.q())) {
        throw DomainError(std::string(op) + ": requires 1 <= q < 3, got q = " + fmt(model.q()));
    }
    if (!(1.0 / model.z_sigma() < 1.0)) {
        throw DomainError(std::string(op) + ": sigma = " + fmt(model.sigma()) +
                          " not in Sigma_q (needs sigma > 1/Z_q = " + fmt(1.0 / model.z()) + ")");
    }
}

void require_sigma_qa(const DeformationParams& params, const QGaussian& model, const char* op) {
    if (!in_sigma_qa(params, model.sigma())) {
        throw DomainError(std::string(op) + ": sigma = " + fmt(model.sigma()) +
                          " not in Sigma_{q,a} for (q, a) = (" + fmt(params.q()) + ", " +
                          fmt(params.a()) + ")");
    }
}

LikelihoodKernel::LikelihoodKernel(const QGaussian& model)
    : q_(model.q()),
      mu_(model.mu()),
      sigma_(model.sigma()),
      z_sigma_(model.z_sigma()),
      peak_neg_(0.0),
      quad_coeff_(0.0),
      grad_common_(0.0) {
    require_sigma_q(model, "LikelihoodKernel");
    const double zs_pow = std::pow(z_sigma_, 1.0 - q_);
    peak_neg_ = -deformed::ln_q(1.0 / z_sigma_, q_);
    quad_coeff_ = 1.0 / (zs_pow * (3.0 - q_));
    grad_common_ = 1.0 / (zs_pow * sigma_);
}

double LikelihoodKernel::density(double x) const {
    const double u = standardized(x);
    return deformed::rexp_q(-u * u / (3.0 - q_), q_) / z_sigma_;
}

namespace {

// log(c0 + c2 u^2) for c0 >= 0, c2 > 0 without forming u^2 when it overflows.
double log_quadratic(double c0, double c2, double u) {
    const double au = std::abs(u);
    const double log_lead = std::log(c2) + 2.0 * std::log(au);
    if (log_lead < 700.0) {
        return std::log(c0 + c2 * au * au);
    }
    return log_lead + std::log1p(c0 * std::exp(-log_lead));
}

}  // namespace

double LikelihoodKernel::log_neg_likelihood(double x) const {
    return log_quadratic(peak_neg_, quad_coeff_, standardized(x));
}

double LikelihoodKernel::log_density(double x) const {
    const double u = standardized(x);
    if (is_q_one(q_)) {
        return -u * u / (3.0 - q_) - std::log(z_sigma_);
    }
    // p = (1 + (q-1) u^2/(3-q))^{-1/(q-1)} / (Z sigma)
    return -log_quadratic(1.0, (q_ - 1.0) / (3.0 - q_), u) / (q_ - 1.0) - std::log(z_sigma_);
}

LikelihoodGradient LikelihoodKernel::gradient(double x) const {
    const double u = standardized(x);
    return {2.0 / (3.0 - q_) * grad_common_ * u, -grad_common_ * (1.0 - u * u)};
}

double likelihood_lq(const QGaussian& model, double x) {
    return LikelihoodKernel(model).likelihood(x);
}

LikelihoodGradient likelihood_grad(const QGaussian& model, double x) {
    return LikelihoodKernel(model).gradient(x);
}

double escort_weight(const DeformationParams& params, const QGaussian& model, double x) {
    if (std::abs(params.q() - model.q()) > kQOneTolerance) {
        throw DomainError("escort_weight: deformation q and model q differ");
    }
    const LikelihoodKernel kernel(model);
    return std::pow(kernel.neg_likelihood(x), 1.0 - params.a()) *
           std::pow(kernel.density(x), model.q());
}

bool in_sigma_q(double q, double sigma) {
    return sigma > 0.0 && 1.0 / (normalization_Z(q) * sigma) < 1.0;
}

bool in_sigma_qa(const DeformationParams& params, double sigma) {
    if (!q_in_escort_range(params.q())) {
        throw DomainError("in_sigma_qa: requires 1 <= q < 3, got q = " + fmt(params.q()));
    }
    const ConcavityInterval interval = deformed::concavity_interval(params);
    if (interval.empty) {
        throw DomainError("in_sigma_qa: I_{q,a} is empty for (q, a) = (" + fmt(params.q()) + ", " +
                          fmt(params.a()) + ")");
    }
    if (!in_sigma_q(params.q(), sigma)) {
        return false;
    }
    return 1.0 / (normalization_Z(params.q()) * sigma) < interval.t_hi;
}

bool escort_moment_integrable(const DeformationParams& params, double gamma) {
    const double q = params.q();
    if (is_q_one(q)) {
        return true;
    }
    return gamma < 0.5 + 1.0 / (q - 1.0) + params.a() - 1.0;
}

bool power_moment_integrable(double q, int n, double gamma) {
    if (is_q_one(q)) {
        return true;
    }
    return gamma < 0.5 + 1.0 / (q - 1.0) + static_cast<double>(n) - 1.0;
}

}  // namespace gaussian
}  // namespace qgeom
