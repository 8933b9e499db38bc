#ifndef QGEOM_Q_GAUSSIAN_HPP
#define QGEOM_Q_GAUSSIAN_HPP

#include <cmath>

#include "qgeom/deformed.hpp"
#include "qgeom/error.hpp"

namespace qgeom {

/// Location/scale parameter xi = (mu, sigma), sigma > 0.
struct LocationScale {
    double mu;
    double sigma;

    LocationScale(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
        if (!std::isfinite(mu_) || !(sigma_ > 0.0) || !std::isfinite(sigma_)) {
            throw DomainError("LocationScale: need finite mu and sigma > 0");
        }
    }
};

/// Above this q the normalisation blows up and every integral loses
/// conditioning; models refuse to be built.
inline constexpr double kMaxQ = 2.999;

/// q-Gaussian density (1/(Z_q sigma)) Rexp_q(-((x-mu)/sigma)^2/(3-q)).
class QGaussian {
public:
    QGaussian(double q, LocationScale xi);

    double q() const { return q_; }
    const LocationScale& xi() const { return xi_; }
    double mu() const { return xi_.mu; }
    double sigma() const { return xi_.sigma; }
    double z() const { return z_; }
    /// Z_q * sigma; 1/(Z_q sigma) is the peak density.
    double z_sigma() const { return z_ * xi_.sigma; }

private:
    double q_;
    LocationScale xi_;
    double z_;
};

namespace gaussian {

double normalization_Z(double q);

double density(const QGaussian& model, double x);

struct LikelihoodGradient {
    double d_mu;
    double d_sigma;
};

/// ln_q(density), evaluated from the quadratic closed form. Requires
/// 1 <= q < 3 and sigma in Sigma_q.
double likelihood_lq(const QGaussian& model, double x);

LikelihoodGradient likelihood_grad(const QGaussian& model, double x);

/// Constants of the closed form
///   l_q(x; xi) = ln_q(1/(Z_q sigma)) - u^2 / ((Z_q sigma)^{1-q} (3-q)),
/// u = (x - mu)/sigma, hoisted out of integrand loops. Construction checks
/// 1 <= q < 3 and sigma in Sigma_q.
class LikelihoodKernel {
public:
    explicit LikelihoodKernel(const QGaussian& model);

    double q() const { return q_; }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double z_sigma() const { return z_sigma_; }

    double standardized(double x) const { return (x - mu_) / sigma_; }

    /// -l_q(x); bounded below by peak_neg_likelihood() > 0.
    double neg_likelihood(double x) const {
        const double u = standardized(x);
        return peak_neg_ + quad_coeff_ * u * u;
    }
    double likelihood(double x) const { return -neg_likelihood(x); }
    /// log(-l_q(x)), finite where -l_q itself overflows (|u| near 1e154).
    double log_neg_likelihood(double x) const;

    /// -ln_q(1/(Z_q sigma)).
    double peak_neg_likelihood() const { return peak_neg_; }
    /// 1/((Z_q sigma)^{1-q} (3-q)).
    double quadratic_coefficient() const { return quad_coeff_; }

    double density(double x) const;
    /// log p(x); finite wherever density(x) > 0 and further into the tails.
    double log_density(double x) const;
    LikelihoodGradient gradient(double x) const;

private:
    double q_;
    double mu_;
    double sigma_;
    double z_sigma_;
    double peak_neg_;
    double quad_coeff_;
    double grad_common_;  // 1/((Z_q sigma)^{1-q} sigma)
};

/// d nu_{q,a;xi}/dx = (-l_q)^{1-a} p^q.
double escort_weight(const DeformationParams& params, const QGaussian& model, double x);

/// sigma > 1/Z_q.
bool in_sigma_q(double q, double sigma);

/// sigma in Sigma_q and 1/(Z_q sigma) < T_{q,a}. Throws when I_{q,a} is empty
/// or q is outside [1, 3).
bool in_sigma_qa(const DeformationParams& params, double sigma);

/// (lambda + x^2)^gamma integrable against nu_{q,a;xi}.
bool escort_moment_integrable(const DeformationParams& params, double gamma);

/// exp_q(-x^2)^{(n-1)(q-1)+q} x^{2 gamma} integrable over the line.
bool power_moment_integrable(double q, int n, double gamma);

/// Throws DomainError unless 1 <= q < 3 and sigma in Sigma_q.
void require_sigma_q(const QGaussian& model, const char* op);

/// Throws DomainError unless params are geometry-valid and sigma in Sigma_{q,a}.
void require_sigma_qa(const DeformationParams& params, const QGaussian& model, const char* op);

}  // namespace gaussian
}  // namespace qgeom

#endif  // QGEOM_Q_GAUSSIAN_HPP
