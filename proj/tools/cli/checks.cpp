#include "checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qgeom/deformed.hpp"
#include "qgeom/entropy.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/numerics.hpp"
#include "qgeom/q_gaussian.hpp"

namespace qgeom::cli {

namespace {

using deformed::Rational;

constexpr std::uint64_t kSeed = 0x5eed2026ULL;

double rel_error(double value, double ref) {
    const double scale = std::max(std::abs(ref), std::numeric_limits<double>::min());
    return std::abs(value - ref) / scale;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Tracks the worst error and where it happened.
struct Worst {
    double error = 0.0;
    std::string where;
    long cases = 0;

    void add(double e, const std::string& at) {
        ++cases;
        if (!(e <= error)) {  // NaN always becomes the worst
            error = e;
            where = at;
        }
    }
};

CheckResult finish(const std::string& name, const Worst& w, double tol, bool pass_if_below = true) {
    CheckResult r;
    r.name = name;
    r.max_error = w.error;
    r.tolerance = tol;
    r.cases = w.cases;
    r.passed = pass_if_below ? (w.error <= tol) : (w.error >= tol);
    r.detail = w.where.empty() ? "" : "worst at " + w.where;
    return r;
}

std::string point(double q, double a, double sigma) {
    std::ostringstream os;
    os << "q=" << q << " a=" << a << " sigma=" << sigma;
    return os.str();
}

QuadratureConfig fine() {
    QuadratureConfig c;
    c.abs_tol = 1e-13;
    c.rel_tol = 1e-12;
    return c;
}

/// q in {1, 1.5, 2, 2.5}, a in {1/2, 1, 2}, sigma in {1, 2, 5}, restricted
/// to sigma in Sigma_{q,a}.
std::vector<std::pair<DeformationParams, double>> gauge_grid() {
    std::vector<std::pair<DeformationParams, double>> out;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        for (double a : {0.5, 1.0, 2.0}) {
            const DeformationParams p(q, a);
            for (double sigma : {1.0, 2.0, 5.0}) {
                if (gaussian::in_sigma_qa(p, sigma)) {
                    out.emplace_back(p, sigma);
                }
            }
        }
    }
    return out;
}

/// Six interior points shared by the Hessian and cubic tensor checks.
std::vector<std::pair<DeformationParams, LocationScale>> probe_points() {
    return {
        {{1.0, 1.0}, {0.0, 1.0}}, {{1.0, 2.0}, {0.5, 1.0}}, {{1.5, 0.5}, {0.0, 2.0}},
        {{2.0, 2.0}, {-1.0, 1.0}}, {{2.5, 1.0}, {0.0, 2.0}}, {{2.0, 0.5}, {0.0, 5.0}},
    };
}

// ---------------------------------------------------------------------------

CheckResult check_coefficient_table() {
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 6);
    long mismatches = 0;
    long cases = 0;
    std::string first_bad;
    auto expect = [&](const Rational& got, const Rational& want, const std::string& what) {
        ++cases;
        if (got != want) {
            ++mismatches;
            if (first_bad.empty()) {
                first_bad = what;
            }
        }
    };
    const Rational one(1);
    for (int i = 0; i < 20; ++i) {
        const Rational q(num(rng), den(rng));
        Rational a(0);
        while (a == 0) {
            a = Rational(num(rng), den(rng));
        }
        const deformed::ExactCoefficientTable t = deformed::b_table_exact(q, a, 3);
        const Rational qm = q - one;
        const std::string at = "q=" + q.str() + " a=" + a.str();
        expect(t.at(1, 0), one, "b^1_0 " + at);
        expect(t.at(2, 0), a * qm + one, "b^2_0 " + at);
        expect(t.at(2, 1), a - one, "b^2_1 " + at);
        expect(t.at(3, 0), (2 * a * qm + one) * (a * qm + one), "b^3_0 " + at);
        expect(t.at(3, 1), (a - one) * ((4 * a + one) * qm + 3), "b^3_1 " + at);
        expect(t.at(3, 2), (a - one) * (2 * a - one), "b^3_2 " + at);

        const deformed::ExactCoefficientTable at_q1 = deformed::b_table_exact(one, a, 10);
        const deformed::ExactCoefficientTable at_a1 = deformed::b_table_exact(q, one, 10);
        for (int n = 1; n <= 10; ++n) {
            expect(at_q1.at(n, 0), one, "b^n_0(1,a) " + at);
            for (int j = 1; j < n; ++j) {
                expect(at_a1.at(n, j), Rational(0), "b^n_j(q,1) " + at);
            }
        }
    }
    CheckResult r;
    r.name = "coefficient_table";
    r.max_error = static_cast<double>(mismatches);
    r.tolerance = 0.0;
    r.cases = cases;
    r.passed = mismatches == 0;
    r.detail = mismatches == 0 ? "exact" : "first mismatch " + first_bad;
    return r;
}

CheckResult check_round_trip() {
    Worst w;
    const DeformationParams params[] = {{1.0, 1.0}, {1.0, 2.0}, {1.5, 0.5}, {2.0, 2.0},
                                        {2.5, 1.0}, {0.5, 3.0}, {1.0, -1.0}, {-1.0, 2.0}};
    for (const DeformationParams& p : params) {
        for (int i = 1; i < 500; ++i) {
            const double t = i / 500.0;
            w.add(std::abs(deformed::exp_qa(deformed::ln_qa(t, p), p) - t),
                  point(p.q(), p.a(), 0.0) + " t=" + fmt(t));
        }
    }
    for (double q : {-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 2.9}) {
        for (int i = 1; i < 200; ++i) {
            const double t = i / 20.0;
            w.add(std::abs(deformed::exp_q(deformed::ln_q(t, q), q) - t) / std::max(1.0, t),
                  "q=" + fmt(q) + " t=" + fmt(t));
        }
    }
    return finish("round_trip", w, 1e-12);
}

CheckResult check_derivative_fd() {
    Worst w;
    for (double q : {1.0, 1.5, 2.0}) {
        for (double a : {0.5, 1.0, 2.0}) {
            const DeformationParams p(q, a);
            if (!p.valid_for_geometry()) {
                continue;
            }
            const deformed::CoefficientTable table = deformed::b_table(p, 3);
            auto f = [&](double tau) { return deformed::exp_qa(tau, p); };
            for (int i = 0; i < 100; ++i) {
                const double tau = -0.1 - 3.9 * i / 99.0;
                // For a > 1 the derivatives blow up at tau = 0, so the step
                // shrinks with |tau| there.
                const double scale = a > 1.0 ? std::abs(tau) : std::max(1.0, std::abs(tau));
                for (int n = 1; n <= 3; ++n) {
                    // One Richardson step lifts truncation to O(h^4), which
                    // permits a larger h and keeps round-off out of n = 3.
                    const double h = 0.5 * scale *
                                     std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (n + 4));
                    const double coarse = numerics::finite_difference(f, tau, n, h);
                    const double fine_d = numerics::finite_difference(f, tau, n, h / 2);
                    const double fd = (4.0 * fine_d - coarse) / 3.0;
                    const double exact = deformed::exp_qa_nth_derivative(tau, p, table, n);
                    w.add(rel_error(exact, fd), point(q, a, 0.0) + " n=" + std::to_string(n) +
                                                    " tau=" + fmt(tau));
                }
            }
        }
    }
    return finish("derivative_fd", w, 1e-5);
}

CheckResult check_concavity() {
    // Seven, seven and six pairs from the three non-emptiness branches:
    // q > 1 with 1 - a < q/(q-1); 0 < q <= 1; q <= 0 with a > 1.
    const DeformationParams pairs[] = {
        {1.5, 0.5}, {1.5, 2.0}, {2.0, 1.0}, {2.0, -0.5}, {2.5, 3.0}, {1.2, -2.0}, {2.9, 0.8},
        {1.0, 1.0}, {1.0, 0.5}, {1.0, 3.0}, {0.5, 2.0}, {0.5, -1.0}, {0.8, 0.3}, {1.0, -2.0},
        {0.0, 2.0}, {-1.0, 2.0}, {-0.5, 1.5}, {-2.0, 3.0}, {0.0, 1.2}, {-1.0, 5.0},
    };
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> unit(1e-3, 1.0 - 1e-3);
    long cases = 0;
    long violations = 0;
    std::string first_bad;
    for (const DeformationParams& p : pairs) {
        const ConcavityInterval iv = deformed::concavity_interval(p);
        if (iv.empty) {
            ++violations;
            first_bad = "empty interval at " + point(p.q(), p.a(), 0.0);
            continue;
        }
        const double width = iv.t_hi - iv.t_lo;
        auto sample = [&] { return iv.t_lo + width * unit(rng); };
        for (int i = 0; i < 1000; ++i) {
            const double t = sample();
            ++cases;
            if (!(deformed::ln_qa_second_derivative(t, p) < 0.0)) {
                ++violations;
                if (first_bad.empty()) {
                    first_bad = "second derivative at " + point(p.q(), p.a(), 0.0) + " t=" + fmt(t);
                }
            }
        }
        for (int i = 0; i < 1000; ++i) {
            double x = sample();
            double y = sample();
            while (std::abs(x - y) < 1e-2 * width) {
                y = sample();
            }
            ++cases;
            const double mid = deformed::ln_qa(0.5 * (x + y), p);
            const double chord = 0.5 * (deformed::ln_qa(x, p) + deformed::ln_qa(y, p));
            if (!(mid > chord)) {
                ++violations;
                if (first_bad.empty()) {
                    first_bad = "midpoint at " + point(p.q(), p.a(), 0.0) + " x=" + fmt(x) +
                                " y=" + fmt(y);
                }
            }
        }
    }
    CheckResult r;
    r.name = "concavity";
    r.max_error = static_cast<double>(violations);
    r.tolerance = 0.0;
    r.cases = cases;
    r.passed = violations == 0;
    r.detail = violations == 0 ? "strict at every sample" : "first violation " + first_bad;
    return r;
}

CheckResult check_normalization() {
    Worst w;
    QuadratureConfig config;
    config.rel_tol = 1e-11;
    for (double q : {1.0, 1.5, 2.0, 2.5, 0.0, -1.0}) {
        for (double sigma : {0.5, 1.0, 3.0}) {
            const QGaussian m(q, LocationScale(0.25, sigma));
            const IntegralEstimate mass = numerics::integrate_real_line(
                [&](double x) { return gaussian::density(m, x); }, config.centered(0.25, sigma));
            w.add(mass.converged ? std::abs(mass.value - 1.0) : 1.0,
                  "mass q=" + fmt(q) + " sigma=" + fmt(sigma));
        }
    }
    CheckResult r = finish("normalization", w, 1e-8);
    // The closed constants carry their own, tighter tolerance.
    const double z_err = std::max(
        rel_error(gaussian::normalization_Z(1.0), std::sqrt(2.0 * std::numbers::pi)),
        rel_error(gaussian::normalization_Z(2.0), std::numbers::pi));
    r.cases += 2;
    r.passed = r.passed && z_err <= 1e-12;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("Z_1, Z_2 relative error ") + fmt(z_err);
    return r;
}

CheckResult check_gauge_entropy() {
    Worst w;
    for (const auto& [p, sigma] : gauge_grid()) {
        const LocationScale xi(0.0, sigma);
        const IntegralEstimate refined = entropy::entropy_estimate(p, xi, fine());
        const IntegralEstimate unit =
            entropy::entropy_estimate(DeformationParams(p.q(), 1.0), xi, fine());
        const bool ok = refined.converged && unit.converged;
        w.add(ok ? std::abs(p.a() * refined.value - unit.value) : 1.0,
              point(p.q(), p.a(), sigma));
    }
    return finish("gauge_entropy", w, 1e-7);
}

CheckResult check_gauge_separation() {
    const std::vector<double> sweep = {2.0, 20.0};
    const entropy::GaugeReport rep = entropy::gauge_report(
        2.0, 2.0, LocationScale(0.0, 1.0), LocationScale(0.0, 2.0), {}, sweep, fine());
    CheckResult r;
    r.name = "gauge_separation";
    r.max_error = rep.separation;
    r.tolerance = 1e3;
    r.cases = 1;
    r.passed = rep.converged && rep.separation >= 1e3;
    r.detail = "lambda*=" + fmt(rep.fitted_lambda) + " fit residual " + fmt(rep.fit_residual) +
               " far residual " + fmt(rep.far_residual) + "; value is the separation ratio";
    return r;
}

CheckResult check_divergence_positivity() {
    std::mt19937_64 rng(kSeed + 7);
    std::uniform_real_distribution<double> q_dist(1.0, 2.8);
    std::uniform_real_distribution<double> a_dist(0.4, 3.0);
    std::uniform_real_distribution<double> mu_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> sigma_dist(0.5, 6.0);
    Worst diag;
    double min_d = std::numeric_limits<double>::infinity();
    std::string min_at;
    long positive = 0;
    int drawn = 0;
    while (drawn < 200) {
        const double q = q_dist(rng);
        const double a = a_dist(rng);
        const LocationScale p(mu_dist(rng), sigma_dist(rng));
        const LocationScale r(mu_dist(rng), sigma_dist(rng));
        const DeformationParams params(q, a);
        if (!params.valid_for_geometry() || !gaussian::in_sigma_qa(params, p.sigma) ||
            !gaussian::in_sigma_qa(params, r.sigma)) {
            continue;
        }
        ++drawn;
        const entropy::EntropyReport d = entropy::entropy_report(params, p, r, fine());
        const entropy::EntropyReport self = entropy::entropy_report(params, p, p, fine());
        if (d.converged() && d.relative > 0.0) {
            ++positive;
        }
        if (d.relative < min_d) {
            min_d = d.relative;
            min_at = point(q, a, p.sigma);
        }
        diag.add(self.converged() ? std::abs(self.relative) : 1.0, point(q, a, p.sigma));
    }
    CheckResult res;
    res.name = "divergence_positivity";
    res.max_error = diag.error;
    res.tolerance = 1e-9;
    res.cases = 2 * drawn;
    res.passed = positive == drawn && diag.error <= 1e-9;
    res.detail = std::to_string(positive) + "/" + std::to_string(drawn) +
                 " pairs positive, min D " + fmt(min_d) + " at " + min_at +
                 "; value is max |D(p,p)|";
    return res;
}

CheckResult check_phi_closed_form() {
    Worst w;
    QuadratureConfig config;
    config.abs_tol = 1e-16;
    config.rel_tol = 1e-11;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        for (double sigma : {1.0, 2.0}) {
            const LocationScale xi(0.0, sigma);
            for (int n = 1; n <= 3; ++n) {
                for (int k = 0; k <= n; ++k) {
                    const IntegralEstimate est =
                        geometry::phi_moment_quadrature(q, n, k, 0, xi, config);
                    w.add(est.converged ? rel_error(geometry::phi_moment_closed(q, n, k, xi),
                                                    est.value)
                                        : 1.0,
                          point(q, 0.0, sigma) + " n=" + std::to_string(n) +
                              " k=" + std::to_string(k));
                }
            }
        }
    }
    return finish("phi_closed_form", w, 1e-7);
}

CheckResult check_phi_residue() {
    Worst w;
    QuadratureConfig config;
    config.abs_tol = 1e-16;
    config.rel_tol = 1e-11;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        for (double sigma : {1.0, 2.0}) {
            const LocationScale xi(0.0, sigma);
            for (int k = 0; k <= 2; ++k) {
                const IntegralEstimate est = geometry::phi_moment_quadrature(q, 2, k, 1, xi, config);
                const double printed = geometry::phi_residue_formula(q, k, xi);
                w.add(est.converged ? rel_error(printed, est.value) : 1.0,
                      point(q, 0.0, sigma) + " k=" + std::to_string(k) + " printed " +
                          fmt(printed) + " vs integral " + fmt(est.value));
            }
        }
    }
    return finish("phi_residue", w, 1e-7);
}

CheckResult check_metric_fisher() {
    Worst w;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        for (double sigma : {1.0, 2.0, 5.0}) {
            const DeformationParams p(q, 1.0);
            const LocationScale xi(0.0, sigma);
            const double s2 = sigma * sigma;
            for (const MetricTensor& g :
                 {geometry::metric_closed(p, xi), geometry::metric_quadrature(p, xi, fine())}) {
                const std::string at =
                    point(q, 1.0, sigma) + " " + std::string(to_string(g.method));
                if (!g.converged) {
                    w.add(1.0, at + " (not converged)");
                    continue;
                }
                w.add(std::abs(g.g_mumu - 1.0 / s2), at + " g_mumu");
                w.add(std::abs(g.g_musigma), at + " g_musigma");
                w.add(std::abs(g.g_sigmasigma - (3.0 - q) / s2), at + " g_sigmasigma");
            }
        }
    }
    return finish("metric_fisher", w, 1e-7);
}

CheckResult check_metric_two_term() {
    Worst w;
    for (const auto& [p, sigma] : gauge_grid()) {
        const LocationScale xi(0.0, sigma);
        const MetricTensor printed = geometry::metric_two_term(p, xi);
        const MetricTensor quad = geometry::metric_quadrature(p, xi, fine());
        const std::string at = point(p.q(), p.a(), sigma);
        w.add(rel_error(printed.g_mumu, quad.g_mumu),
              at + " g_mumu " + fmt(printed.g_mumu) + " vs " + fmt(quad.g_mumu));
        w.add(rel_error(printed.g_sigmasigma, quad.g_sigmasigma),
              at + " g_sigmasigma " + fmt(printed.g_sigmasigma) + " vs " + fmt(quad.g_sigmasigma));
    }
    return finish("metric_two_term", w, 1e-6);
}

CheckResult check_metric_offdiagonal() {
    Worst w;
    for (const auto& [p, sigma] : gauge_grid()) {
        const LocationScale xi(0.0, sigma);
        const std::string at = point(p.q(), p.a(), sigma);
        w.add(std::abs(geometry::metric_closed(p, xi).g_musigma), at + " closed");
        w.add(std::abs(geometry::metric_quadrature(p, xi, fine()).g_musigma), at + " quadrature");
    }
    return finish("metric_offdiagonal", w, 1e-8);
}

CheckResult check_metric_assembly() {
    Worst w;
    for (const auto& [p, sigma] : gauge_grid()) {
        const LocationScale xi(0.0, sigma);
        const MetricTensor closed = geometry::metric_closed(p, xi);
        const MetricTensor quad = geometry::metric_quadrature(p, xi, fine());
        const std::string at = point(p.q(), p.a(), sigma);
        const bool ok = closed.converged && quad.converged;
        w.add(ok ? rel_error(closed.g_mumu, quad.g_mumu) : 1.0, at + " g_mumu");
        w.add(ok ? rel_error(closed.g_sigmasigma, quad.g_sigmasigma) : 1.0, at + " g_sigmasigma");
    }
    return finish("metric_assembly", w, 1e-8);
}

CheckResult check_hessian() {
    Worst w;
    for (const auto& [p, xi] : probe_points()) {
        const geometry::HessianCheck h = geometry::metric_hessian_check(p, xi, fine());
        w.add(h.converged ? h.max_residual() : 1.0, point(p.q(), p.a(), xi.sigma));
    }
    return finish("hessian", w, 1e-4);
}

CheckResult check_cubic_symmetry() {
    using C = Coordinate;
    Worst w;
    for (const auto& [p, xi] : probe_points()) {
        // All eight ordered triples, grouped by the number of sigma indices.
        std::array<std::vector<double>, 4> groups;
        for (int mask = 0; mask < 8; ++mask) {
            const C s = (mask & 1) ? C::sigma : C::mu;
            const C t = (mask & 2) ? C::sigma : C::mu;
            const C u = (mask & 4) ? C::sigma : C::mu;
            const IntegralEstimate est = geometry::cubic_component_quadrature(p, xi, s, t, u, fine());
            const int sigmas = (s == C::sigma) + (t == C::sigma) + (u == C::sigma);
            groups[static_cast<std::size_t>(sigmas)].push_back(est.converged ? est.value : NAN);
        }
        const std::string at = point(p.q(), p.a(), xi.sigma);
        for (std::size_t g = 0; g < 4; ++g) {
            const auto [lo, hi] = std::minmax_element(groups[g].begin(), groups[g].end());
            const double spread = (*hi - *lo) / std::max(1.0, std::abs(*hi));
            w.add(spread, at + " permutation spread, " + std::to_string(g) + " sigma indices");
            if (g % 2 == 0) {  // odd number of mu indices
                w.add(std::max(std::abs(*lo), std::abs(*hi)),
                      at + " odd mu count, " + std::to_string(g) + " sigma indices");
            }
        }
    }
    return finish("cubic_symmetry", w, 1e-7);
}

CheckResult check_cubic_unit() {
    Worst w;
    for (double q : {1.0, 1.5, 2.0, 2.5}) {
        for (double sigma : {1.0, 2.0}) {
            const DeformationParams p(q, 1.0);
            const LocationScale xi(0.0, sigma);
            // j = 0 assembly written out from the closed moments.
            const double b0 = deformed::b_table(p, 3).at(3, 0);
            const double zs = gaussian::normalization_Z(q) * sigma;
            const double g = 1.0 / (std::pow(zs, 1.0 - q) * sigma);
            const double am = 2.0 / (3.0 - q) * g;
            std::array<double, 4> phi{};
            for (int k = 0; k <= 3; ++k) {
                phi[static_cast<std::size_t>(k)] = geometry::phi_moment_closed(q, 3, k, xi);
            }
            const double mms = -am * am * g * b0 * (phi[1] - phi[2]);
            const double sss = -g * g * g * b0 * (phi[0] - 3.0 * phi[1] + 3.0 * phi[2] - phi[3]);
            const CubicTensor quad = geometry::cubic_tensor_quadrature(p, xi, fine());
            const std::string at = point(q, 1.0, sigma);
            // Relative above 1, absolute below: at q = 2 both components vanish.
            auto err = [](double v, double ref) { return std::abs(v - ref) / std::max(1.0, std::abs(ref)); };
            w.add(quad.converged ? err(quad.by_sigma_count[1], mms) : 1.0, at + " C_mumusigma");
            w.add(quad.converged ? err(quad.by_sigma_count[3], sss) : 1.0, at + " C_sigmasigmasigma");
        }
    }
    return finish("cubic_unit", w, 1e-6);
}

Check make(std::string name, std::string description, CheckResult (*fn)()) {
    return Check{std::move(name), std::move(description), fn};
}

}  // namespace

std::vector<Check> quick_checks() {
    return {
        make("coefficient_table", "printed b-coefficients and the q=1 / a=1 identities, exact",
             check_coefficient_table),
        make("round_trip", "exp_qa(ln_qa(t)) = t and exp_q(ln_q(t)) = t", check_round_trip),
        make("metric_fisher", "a = 1 metric equals (1/s^2, 0, (3-q)/s^2)", check_metric_fisher),
        make("normalization", "densities integrate to one; Z_1 and Z_2", check_normalization),
    };
}

std::vector<Check> full_checks() {
    std::vector<Check> checks = quick_checks();
    const std::vector<Check> more = {
        make("derivative_fd", "n-th derivative of exp_qa against finite differences",
             check_derivative_fd),
        make("concavity", "ln_qa strictly concave on its concavity interval", check_concavity),
        make("gauge_entropy", "a Ent_{q,a} = Ent_{q,1}", check_gauge_entropy),
        make("gauge_separation", "no single lambda relates the two divergences",
             check_gauge_separation),
        make("divergence_positivity", "D(p,r) > 0 for p != r and D(p,p) = 0",
             check_divergence_positivity),
        make("phi_closed_form", "j = 0 moment closed forms against quadrature",
             check_phi_closed_form),
        make("phi_residue", "printed j = 1 residue expression against quadrature",
             check_phi_residue),
        make("metric_two_term", "printed two-term metric (b^2_1(q,a) in both terms) against quadrature",
             check_metric_two_term),
        make("metric_offdiagonal", "g_musigma vanishes", check_metric_offdiagonal),
        make("metric_assembly", "moment assembly of the metric against direct quadrature",
             check_metric_assembly),
        make("hessian", "mixed derivatives of D at the diagonal equal -g", check_hessian),
        make("cubic_symmetry", "cubic tensor symmetric, odd mu counts vanish",
             check_cubic_symmetry),
        make("cubic_unit", "a = 1 cubic tensor equals the j = 0 moment assembly",
             check_cubic_unit),
    };
    checks.insert(checks.end(), more.begin(), more.end());
    return checks;
}

Check find_check(const std::string& name) {
    for (Check& c : full_checks()) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("unknown check: " + name);
}

}  // namespace qgeom::cli
