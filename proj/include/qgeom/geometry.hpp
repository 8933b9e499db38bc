#ifndef QGEOM_GEOMETRY_HPP
#define QGEOM_GEOMETRY_HPP

// Moment integrals
//   Phi(q,n,k,j;xi) = int u^{2k} p^{(n-1)(q-1)+q} (-l_q)^{-j} dx,  u = (x-mu)/sigma,
// the refined metric g^{(q,a)} and cubic tensor C^{(q,a)} assembled from them,
// and direct-quadrature oracles for both.

#include <array>
#include <string_view>

#include "qgeom/deformed.hpp"
#include "qgeom/numerics.hpp"
#include "qgeom/q_gaussian.hpp"

namespace qgeom {

enum class Method { closed_form, quadrature };

std::string_view to_string(Method method);

enum class Coordinate { mu, sigma };

struct MetricTensor {
    double g_mumu = 0.0;
    double g_musigma = 0.0;
    double g_sigmasigma = 0.0;
    DeformationParams params{1.0, 1.0};
    LocationScale xi{0.0, 1.0};
    Method method = Method::closed_form;
    /// Per-component quadrature error (zero for closed-form components).
    std::array<double, 3> error_estimates{};
    bool converged = true;
    /// Pole radius below 1e-3 sigma: the j = 1 moments blow up like 1/r.
    bool conditioning_warning = false;

    double component(Coordinate s, Coordinate t) const;
};

/// Symmetric cubic tensor; stored by the number of sigma indices (0..3), so
/// every permutation of (s, t, u) reads the same slot.
struct CubicTensor {
    std::array<double, 4> by_sigma_count{};
    DeformationParams params{1.0, 1.0};
    LocationScale xi{0.0, 1.0};
    Method method = Method::closed_form;
    std::array<double, 4> error_estimates{};
    bool converged = true;
    bool conditioning_warning = false;

    double operator()(Coordinate s, Coordinate t, Coordinate u) const;
};

struct PoleRadius {
    double r;
    double q;
    double sigma;
};

namespace geometry {

/// Closed form of Phi(q,n,k,0): (2k-1)!! at q = 1, a Beta-function
/// expression for 1 < q < 3.
double phi_moment_closed(double q, int n, int k, const LocationScale& xi);

/// Phi(1,n,k,1) = 2^k/sqrt(pi) I_k with
///   I_0 = pi e^L erfc(sqrt L)/sqrt L,  I_k = Gamma(k - 1/2) - L I_{k-1},
/// L = log(Z_1 sigma). At q = 1 the integrand does not depend on n.
double phi_gaussian_j1_closed(int k, const LocationScale& xi);

/// The residue expression (-1)^k pi (Z_q sigma)^{1-q} (3-q) r^{2k-1} / sigma^{2(k-1)}
/// exactly as printed for Phi(q,n,k,1). It does NOT agree with the integral
/// (see README, "Known discrepancies"); kept for reproduction only.
double phi_residue_formula(double q, int k, const LocationScale& xi);

IntegralEstimate phi_moment_quadrature(double q, int n, int k, int j, const LocationScale& xi,
                                       const QuadratureConfig& config);

struct PhiResult {
    double value = 0.0;
    double error_estimate = 0.0;
    Method method = Method::closed_form;
    bool converged = true;
};

/// Closed form where one is known (j = 0 for all q; j = 1 at q = 1),
/// quadrature otherwise. Validates 1 <= q < 3, sigma in Sigma_q, 0 <= k <= n,
/// j >= 0 and integrability.
PhiResult phi_moment_result(double q, int n, int k, int j, const LocationScale& xi,
                            const QuadratureConfig& config = {});

double phi_moment(double q, int n, int k, int j, const LocationScale& xi,
                  const QuadratureConfig& config = {});

PoleRadius pole_radius(double q, double sigma);

/// Tight defaults for moments that fall back to quadrature inside closed
/// assemblies (values can be ~1e-5, so the absolute floor is small).
QuadratureConfig assembly_quadrature_config();

/// Direct quadrature of the metric integrand
///   d_s ln_{q,a}(p) d_t ln_{q,a}(p) exp''_{q,a}(ln_{q,a}(p)).
MetricTensor metric_quadrature(const DeformationParams& params, const LocationScale& xi,
                               const QuadratureConfig& config = {});

/// Moment assembly
///   g_mumu = 4/(3-q)^2 sum_j b^2_j G^2 Phi(q,2,1,j),
///   g_ss   = sum_j b^2_j G^2 (Phi(q,2,0,j) - 2 Phi(q,2,1,j) + Phi(q,2,2,j)),
/// G = 1/((Z_q sigma)^{1-q} sigma), g_musigma = 0.
MetricTensor metric_closed(const DeformationParams& params, const LocationScale& xi,
                           const QuadratureConfig& config = assembly_quadrature_config());

enum class SigmaCoefficient { corrected, as_printed };

/// The explicit two-term metric formula built on the residue expression.
/// corrected uses b^2_1(q,a) in the sigma-sigma term, as_printed uses
/// b^2_1(q,1) (identically zero).
MetricTensor metric_two_term(const DeformationParams& params, const LocationScale& xi,
                          SigmaCoefficient coefficient = SigmaCoefficient::corrected);

/// rho(x; xi1, xi2) = {ln_{q,a}(p1) - ln_{q,a}(p2)} exp'_{q,a}(ln_{q,a}(p1)),
/// evaluated literally through the deformed functions.
double relative_entropy_integrand(const DeformationParams& params, const LocationScale& xi1,
                                  const LocationScale& xi2, double x);

IntegralEstimate relative_entropy_by_integrand(const DeformationParams& params,
                                               const LocationScale& xi1,
                                               const LocationScale& xi2,
                                               const QuadratureConfig& config = {});

struct HessianCheck {
    /// Central mixed differences of D(xi1, xi2) at xi1 = xi2 = xi.
    double mixed_mumu = 0.0;
    double mixed_musigma = 0.0;
    double mixed_sigmasigma = 0.0;
    MetricTensor metric;
    /// |-mixed_st - g_st|; the mixed derivative at the diagonal is -g.
    double residual_mumu = 0.0;
    double residual_musigma = 0.0;
    double residual_sigmasigma = 0.0;
    bool converged = true;

    double max_residual() const;
};

HessianCheck metric_hessian_check(const DeformationParams& params, const LocationScale& xi,
                                  const QuadratureConfig& config = {});

/// Moment assembly of C^{(q,a)} with b^3_j, j = 0, 1, 2.
CubicTensor cubic_tensor(const DeformationParams& params, const LocationScale& xi,
                         const QuadratureConfig& config = assembly_quadrature_config());

/// Direct quadrature of one ordered component
///   int d_s ln_{q,a}(p) d_t ln_{q,a}(p) d_u ln_{q,a}(p) exp'''_{q,a}(ln_{q,a}(p)) dx.
IntegralEstimate cubic_component_quadrature(const DeformationParams& params,
                                            const LocationScale& xi, Coordinate s,
                                            Coordinate t, Coordinate u,
                                            const QuadratureConfig& config = {});

CubicTensor cubic_tensor_quadrature(const DeformationParams& params, const LocationScale& xi,
                                    const QuadratureConfig& config = {});

}  // namespace geometry
}  // namespace qgeom

#endif  // QGEOM_GEOMETRY_HPP
