#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cli.hpp"
#include "qgeom/deformed.hpp"
#include "qgeom/entropy.hpp"
#include "qgeom/error.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/q_gaussian.hpp"
#include "validate.hpp"

namespace qgeom::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGaugeTolerance = 1e-7;

// ---------------------------------------------------------------------------
// Shared flag plumbing

struct CommonFlags {
    std::vector<std::string> q, a, mu, sigma, mu_r, sigma_r, n, k, j, lambda;
    std::string method = "auto";
    std::string format = "csv";
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    std::size_t max_evals = 0;
    CLI::Option* abs_opt = nullptr;
    CLI::Option* rel_opt = nullptr;
    CLI::Option* evals_opt = nullptr;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool no_header = false;
    int digits = 17;
    bool strict = false;
};

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--digits", f.digits, "significant digits in output")
        ->check(CLI::Range(1, 17));
    cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

void add_numeric_flags(CLI::App* cmd, CommonFlags& f) {
    f.abs_opt = cmd->add_option("--abs-tol", f.abs_tol, "absolute quadrature tolerance");
    f.rel_opt = cmd->add_option("--rel-tol", f.rel_tol, "relative quadrature tolerance");
    f.evals_opt = cmd->add_option("--max-evals", f.max_evals, "integrand evaluation budget");
}

void add_grid_flags(CLI::App* cmd, CommonFlags& f) {
    const char* hint = " (repeatable; number or lo:hi:step)";
    cmd->add_option("--q", f.q, std::string("q values") + hint);
    cmd->add_option("--a", f.a, std::string("a values") + hint);
    cmd->add_option("--mu", f.mu, std::string("mu values") + hint);
    cmd->add_option("--sigma", f.sigma, std::string("sigma values") + hint);
    cmd->add_flag("--no-header", f.no_header, "omit the timestamp comment line in CSV output");
    cmd->add_flag("--strict", f.strict, "abort with exit code 2 on invalid grid points");
}

ToleranceFlags tolerance_flags(const CommonFlags& f) {
    ToleranceFlags t;
    if (f.abs_opt != nullptr && f.abs_opt->count() > 0) {
        t.abs_tol = f.abs_tol;
    }
    if (f.rel_opt != nullptr && f.rel_opt->count() > 0) {
        t.rel_tol = f.rel_tol;
    }
    if (f.evals_opt != nullptr && f.evals_opt->count() > 0) {
        t.max_evaluations = f.max_evals;
    }
    return t;
}

bool tolerances_customised(const CommonFlags& f) {
    const ToleranceFlags t = tolerance_flags(f);
    const char* env = std::getenv("QGEOM_DEFAULT_TOL");
    return t.abs_tol || t.rel_tol || t.max_evaluations || (env != nullptr && *env != '\0');
}

std::vector<double> values_or(const std::vector<std::string>& specs, const std::string& flag,
                              std::vector<double> fallback) {
    return specs.empty() ? fallback : expand_values(specs, flag);
}

std::vector<int> int_values_or(const std::vector<std::string>& specs, const std::string& flag,
                               std::vector<int> fallback) {
    if (specs.empty()) {
        return fallback;
    }
    std::vector<int> out;
    for (double v : expand_values(specs, flag)) {
        if (v != std::floor(v) || v < 0 || v > 64) {
            throw UsageError(flag + ": expected integers in [0, 64]");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

OutputOptions output_options(const CommonFlags& f) {
    OutputOptions o;
    o.format = f.format == "json" ? Format::json : Format::csv;
    o.digits = f.digits;
    o.timestamp = !f.no_header;
    return o;
}

std::string num(double v) { return format_number(v, 17); }

// ---------------------------------------------------------------------------
// fn

int cmd_fn(const std::string& name, double q, double a, std::optional<double> t,
           std::optional<double> tau, std::optional<double> x, double mu, double sigma, int digits,
           std::ostream& out) {
    auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) {
            throw UsageError("fn " + name + " requires " + flag);
        }
        return *v;
    };
    double value = 0.0;
    if (name == "ln_q") {
        value = deformed::ln_q(need(t, "--t"), q);
    } else if (name == "exp_q") {
        value = deformed::exp_q(need(tau, "--tau"), q);
    } else if (name == "ln_qa") {
        value = deformed::ln_qa(need(t, "--t"), DeformationParams(q, a));
    } else if (name == "exp_qa") {
        value = deformed::exp_qa(need(tau, "--tau"), DeformationParams(q, a));
    } else if (name == "chi_qa") {
        value = deformed::chi_qa(need(t, "--t"), DeformationParams(q, a));
    } else if (name == "density") {
        value = gaussian::density(QGaussian(q, LocationScale(mu, sigma)), need(x, "--x"));
    } else {
        value = gaussian::likelihood_lq(QGaussian(q, LocationScale(mu, sigma)), need(x, "--x"));
    }
    out << format_number(value, digits) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// table

struct GridPoint {
    double q, a, mu, sigma;
};

std::vector<GridPoint> cartesian(const GridSpec& g) {
    std::vector<GridPoint> pts;
    for (double q : g.q_values) {
        for (double a : g.a_values) {
            for (double mu : g.mu_values) {
                for (double sigma : g.sigma_values) {
                    pts.push_back({q, a, mu, sigma});
                }
            }
        }
    }
    return pts;
}

struct TableRequest {
    std::string quantity;
    std::string method;  // auto | closed_form | quadrature
    QuadratureConfig config;
    QuadratureConfig assembly_config;
    std::vector<double> mu_r, sigma_r;  // empty: reference equals p
    std::vector<int> n, k, j;
};

// Reason a grid point cannot be evaluated, or empty.
std::string point_problem(const GridPoint& pt, bool needs_a, bool needs_sigma_qa) {
    if (!(pt.q >= 1.0 && pt.q <= kMaxQ)) {
        return "q_out_of_range";
    }
    if (!(pt.sigma > 0.0)) {
        return "sigma_not_positive";
    }
    if (needs_a) {
        if (pt.a == 0.0) {
            return "a_zero";
        }
        if (!DeformationParams(pt.q, pt.a).valid_for_geometry()) {
            return "empty_concavity_interval";
        }
    }
    if (!gaussian::in_sigma_q(pt.q, pt.sigma)) {
        return "sigma_not_in_Sigma_q";
    }
    if (needs_sigma_qa && !gaussian::in_sigma_qa(DeformationParams(pt.q, pt.a), pt.sigma)) {
        return "sigma_not_in_Sigma_qa";
    }
    return "";
}

ResultRow base_row(const GridPoint& pt, const std::string& quantity, const std::string& component,
                   const std::string& method) {
    ResultRow r;
    r.q = pt.q;
    r.a = pt.a;
    r.mu = pt.mu;
    r.sigma = pt.sigma;
    r.quantity = quantity;
    r.component = component;
    r.value = kNaN;
    r.error_estimate = kNaN;
    r.method = method;
    r.status = "ok";
    return r;
}

void set_estimate(ResultRow& row, const IntegralEstimate& est) {
    row.value = est.value;
    row.error_estimate = est.abs_error_estimate;
    row.status = est.converged ? "ok" : "warning:not_converged";
}

std::string reference_component(double mu_r, double sigma_r) {
    return "mu_r=" + num(mu_r) + ";sigma_r=" + num(sigma_r);
}

std::vector<ResultRow> evaluate_reference(const TableRequest& req, const GridPoint& pt) {
    const bool divergence = req.quantity == "divergence";
    const std::string method = "quadrature";
    std::vector<std::pair<double, double>> refs;
    for (double mr : req.mu_r.empty() ? std::vector<double>{pt.mu} : req.mu_r) {
        for (double sr : req.sigma_r.empty() ? std::vector<double>{pt.sigma} : req.sigma_r) {
            refs.emplace_back(mr, sr);
        }
    }
    std::vector<ResultRow> rows;
    const std::string problem = point_problem(pt, true, false);
    for (const auto& [mr, sr] : refs) {
        ResultRow row = base_row(pt, req.quantity, reference_component(mr, sr), method);
        if (!problem.empty()) {
            row.status = "skipped:" + problem;
        } else if (!(sr > 0.0) || !gaussian::in_sigma_q(pt.q, sr)) {
            row.status = "skipped:reference_sigma_not_in_Sigma_q";
        } else if (req.method == "closed_form") {
            row.status = "skipped:no_closed_form";
        } else {
            const DeformationParams params(pt.q, pt.a);
            const LocationScale p(pt.mu, pt.sigma);
            const LocationScale r(mr, sr);
            if (divergence) {
                const entropy::EntropyReport rep = entropy::entropy_report(params, p, r, req.config);
                row.value = rep.relative;
                row.error_estimate = rep.error_estimate();
                row.status = rep.converged() ? "ok" : "warning:not_converged";
            } else {
                set_estimate(row, entropy::cross_entropy_estimate(params, p, r, req.config));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> evaluate_entropy(const TableRequest& req, const GridPoint& pt) {
    const bool closed = req.method == "closed_form";
    ResultRow row = base_row(pt, "entropy", "Ent", closed ? "closed_form" : "quadrature");
    const std::string problem = point_problem(pt, true, false);
    if (!problem.empty()) {
        row.status = "skipped:" + problem;
    } else if (closed) {
        if (pt.a != 1.0) {
            row.status = "skipped:no_closed_form";
        } else {
            row.value = entropy::tsallis_entropy_closed(pt.q, LocationScale(pt.mu, pt.sigma));
            row.error_estimate = 0.0;
        }
    } else {
        set_estimate(row, entropy::entropy_estimate(DeformationParams(pt.q, pt.a),
                                                    LocationScale(pt.mu, pt.sigma), req.config));
    }
    return {row};
}

std::vector<ResultRow> evaluate_metric(const TableRequest& req, const GridPoint& pt) {
    const bool quad = req.method == "quadrature";
    const std::string method = quad ? "quadrature" : "closed_form";
    const char* names[] = {"g_mumu", "g_musigma", "g_sigmasigma"};
    std::vector<ResultRow> rows;
    for (const char* c : names) {
        rows.push_back(base_row(pt, "metric", c, method));
    }
    const std::string problem = point_problem(pt, true, true);
    if (!problem.empty()) {
        for (ResultRow& r : rows) {
            r.status = "skipped:" + problem;
        }
        return rows;
    }
    const DeformationParams params(pt.q, pt.a);
    const LocationScale xi(pt.mu, pt.sigma);
    const MetricTensor g = quad ? geometry::metric_quadrature(params, xi, req.config)
                                : geometry::metric_closed(params, xi, req.assembly_config);
    const double values[] = {g.g_mumu, g.g_musigma, g.g_sigmasigma};
    for (std::size_t i = 0; i < 3; ++i) {
        rows[i].value = values[i];
        rows[i].error_estimate = g.error_estimates[i];
        rows[i].status = !g.converged             ? "warning:not_converged"
                         : g.conditioning_warning ? "warning:near_boundary"
                                                  : "ok";
    }
    return rows;
}

std::vector<ResultRow> evaluate_cubic(const TableRequest& req, const GridPoint& pt) {
    const bool quad = req.method == "quadrature";
    const std::string method = quad ? "quadrature" : "closed_form";
    const char* names[] = {"C_mumumu", "C_mumusigma", "C_musigmasigma", "C_sigmasigmasigma"};
    std::vector<ResultRow> rows;
    for (const char* c : names) {
        rows.push_back(base_row(pt, "cubic", c, method));
    }
    const std::string problem = point_problem(pt, true, true);
    if (!problem.empty()) {
        for (ResultRow& r : rows) {
            r.status = "skipped:" + problem;
        }
        return rows;
    }
    const DeformationParams params(pt.q, pt.a);
    const LocationScale xi(pt.mu, pt.sigma);
    const CubicTensor c = quad ? geometry::cubic_tensor_quadrature(params, xi, req.config)
                               : geometry::cubic_tensor(params, xi, req.assembly_config);
    for (std::size_t i = 0; i < 4; ++i) {
        rows[i].value = c.by_sigma_count[i];
        rows[i].error_estimate = c.error_estimates[i];
        rows[i].status = !c.converged             ? "warning:not_converged"
                         : c.conditioning_warning ? "warning:near_boundary"
                                                  : "ok";
    }
    return rows;
}

std::vector<ResultRow> evaluate_phi(const TableRequest& req, const GridPoint& pt) {
    std::vector<ResultRow> rows;
    const std::string problem = point_problem(pt, false, false);
    for (int n : req.n) {
        for (int k : req.k) {
            for (int j : req.j) {
                const std::string comp = "n=" + std::to_string(n) + ";k=" + std::to_string(k) +
                                         ";j=" + std::to_string(j);
                ResultRow row = base_row(pt, "phi", comp, "closed_form");
                const LocationScale xi(pt.mu, pt.sigma);
                if (!problem.empty()) {
                    row.status = "skipped:" + problem;
                } else if (n < 1 || k > n) {
                    row.status = "skipped:index_out_of_range";
                } else if (req.method == "quadrature") {
                    row.method = "quadrature";
                    set_estimate(row, geometry::phi_moment_quadrature(pt.q, n, k, j, xi, req.config));
                } else {
                    const geometry::PhiResult res =
                        geometry::phi_moment_result(pt.q, n, k, j, xi, req.assembly_config);
                    row.method = std::string(to_string(res.method));
                    if (req.method == "closed_form" && res.method != Method::closed_form) {
                        row.status = "skipped:no_closed_form";
                    } else {
                        row.value = res.value;
                        row.error_estimate = res.error_estimate;
                        row.status = res.converged ? "ok" : "warning:not_converged";
                    }
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

// Unexpected library exceptions become row statuses instead of aborting the table.
template <class F>
std::vector<ResultRow> guarded(F&& evaluate, const GridPoint& pt, const std::string& quantity,
                               std::ostream& diag, std::mutex& diag_mutex) {
    std::string status;
    std::string message;
    try {
        return evaluate();
    } catch (const IntegrabilityError& e) {
        status = "skipped:not_integrable";
        message = e.what();
    } catch (const DomainError& e) {
        status = "skipped:domain_error";
        message = e.what();
    } catch (const NumericalError& e) {
        status = "warning:numerical_failure";
        message = e.what();
    }
    {
        const std::lock_guard<std::mutex> lock(diag_mutex);
        diag << "qgeom: " << quantity << " at q=" << num(pt.q) << " a=" << num(pt.a)
             << " mu=" << num(pt.mu) << " sigma=" << num(pt.sigma) << ": " << message << '\n';
    }
    ResultRow row = base_row(pt, quantity, "", "quadrature");
    row.status = status;
    return {row};
}

bool is_failure(const ResultRow& r) {
    return r.status == "warning:not_converged" || r.status == "warning:numerical_failure";
}

bool is_skip(const ResultRow& r) { return r.status.rfind("skipped:", 0) == 0; }

int cmd_table(const std::string& quantity, const CommonFlags& f, std::ostream& out,
              std::ostream& err) {
    GridSpec grid;
    grid.q_values = values_or(f.q, "--q", grid.q_values);
    grid.a_values = values_or(f.a, "--a", grid.a_values);
    grid.mu_values = values_or(f.mu, "--mu", grid.mu_values);
    grid.sigma_values = values_or(f.sigma, "--sigma", grid.sigma_values);
    grid.skip_invalid = !f.strict;

    TableRequest req;
    req.quantity = quantity;
    req.method = f.method;
    req.config = resolve_tolerances(tolerance_flags(f), std::getenv("QGEOM_DEFAULT_TOL"));
    req.assembly_config =
        tolerances_customised(f) ? req.config : geometry::assembly_quadrature_config();
    req.mu_r = values_or(f.mu_r, "--mu-r", {});
    req.sigma_r = values_or(f.sigma_r, "--sigma-r", {});
    req.n = int_values_or(f.n, "--n", {2});
    req.k = int_values_or(f.k, "--k", {0});
    req.j = int_values_or(f.j, "--j", {0});

    const std::vector<GridPoint> points = cartesian(grid);
    std::vector<std::vector<ResultRow>> results(points.size());
    std::mutex diag_mutex;
    parallel_for(points.size(), f.jobs, [&](std::size_t i) {
        const GridPoint& pt = points[i];
        auto eval = [&]() -> std::vector<ResultRow> {
            if (quantity == "entropy") {
                return evaluate_entropy(req, pt);
            }
            if (quantity == "cross" || quantity == "divergence") {
                return evaluate_reference(req, pt);
            }
            if (quantity == "metric") {
                return evaluate_metric(req, pt);
            }
            if (quantity == "cubic") {
                return evaluate_cubic(req, pt);
            }
            return evaluate_phi(req, pt);
        };
        results[i] = guarded(eval, pt, quantity, err, diag_mutex);
        std::stable_sort(results[i].begin(), results[i].end(),
                         [](const ResultRow& x, const ResultRow& y) { return x.component < y.component; });
    });

    std::vector<ResultRow> rows;
    for (std::vector<ResultRow>& chunk : results) {
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    }
    if (f.strict) {
        for (const ResultRow& r : rows) {
            if (is_skip(r)) {
                err << "qgeom: invalid grid point q=" << num(r.q) << " a=" << num(r.a)
                    << " mu=" << num(r.mu) << " sigma=" << num(r.sigma) << " (" << r.status
                    << ")\n";
                return kExitUsage;
            }
        }
    }
    write_rows(out, rows, output_options(f));
    return std::any_of(rows.begin(), rows.end(), is_failure) ? kExitNumerical : kExitOk;
}

// ---------------------------------------------------------------------------
// gauge

int cmd_gauge(const CommonFlags& f, std::ostream& out, std::ostream& err) {
    GridSpec grid;
    grid.q_values = values_or(f.q, "--q", {1.0, 1.5, 2.0, 2.5});
    grid.a_values = values_or(f.a, "--a", {0.5, 1.0, 2.0});
    grid.mu_values = values_or(f.mu, "--mu", {0.0});
    grid.sigma_values = values_or(f.sigma, "--sigma", {1.0, 2.0, 5.0});
    const std::vector<double> sigma_r = values_or(f.sigma_r, "--sigma-r", {2.0});
    const std::vector<double> mu_r = values_or(f.mu_r, "--mu-r", {});
    if (sigma_r.size() != 1 || mu_r.size() > 1) {
        throw UsageError("gauge: --sigma-r and --mu-r take a single value");
    }
    const std::vector<double> lambdas = values_or(f.lambda, "--lambda", {});
    const QuadratureConfig config =
        resolve_tolerances(tolerance_flags(f), std::getenv("QGEOM_DEFAULT_TOL"));

    const std::vector<GridPoint> points = cartesian(grid);
    std::vector<std::vector<ResultRow>> results(points.size());
    std::vector<double> residuals(points.size(), kNaN);
    std::mutex diag_mutex;
    parallel_for(points.size(), f.jobs, [&](std::size_t i) {
        const GridPoint& pt = points[i];
        auto eval = [&]() -> std::vector<ResultRow> {
            const char* names[] = {"entropy_residual", "far_residual", "fit_residual",
                                   "fitted_lambda", "separation"};
            std::vector<ResultRow> rows;
            for (const char* c : names) {
                rows.push_back(base_row(pt, "gauge", c, "quadrature"));
            }
            const std::string problem = point_problem(pt, true, true);
            if (!problem.empty()) {
                for (ResultRow& r : rows) {
                    r.status = "skipped:" + problem;
                }
                return rows;
            }
            const LocationScale p(pt.mu, pt.sigma);
            const LocationScale r(mu_r.empty() ? pt.mu : mu_r[0], sigma_r[0]);
            const std::vector<double> sweep = entropy::default_gauge_sweep(r.sigma);
            const entropy::GaugeReport rep =
                entropy::gauge_report(pt.q, pt.a, p, r, lambdas, sweep, config);
            const std::string status = rep.converged ? "ok" : "warning:not_converged";
            const double values[] = {rep.entropy_residual, rep.far_residual, rep.fit_residual,
                                     rep.fitted_lambda, rep.separation};
            for (std::size_t c = 0; c < rows.size(); ++c) {
                rows[c].value = values[c];
                rows[c].error_estimate = 0.0;
                rows[c].status = status;
            }
            if (rep.converged && rep.entropy_residual > kGaugeTolerance) {
                rows[0].status = "warning:tolerance_breach";
            }
            residuals[i] = rep.entropy_residual;
            for (std::size_t s = 0; s < rep.sweep.size(); ++s) {
                for (std::size_t l = 0; l < lambdas.size(); ++l) {
                    ResultRow row = base_row(pt, "gauge",
                                             "residual;lambda=" + num(lambdas[l]) +
                                                 ";sigma_r=" + num(rep.sweep[s].sigma_r),
                                             "quadrature");
                    row.value = rep.sweep[s].residuals[l];
                    row.error_estimate = rep.sweep[s].error_estimate / rep.sweep[s].normalizer;
                    row.status = status;
                    rows.push_back(std::move(row));
                }
            }
            return rows;
        };
        results[i] = guarded(eval, pt, "gauge", err, diag_mutex);
    });

    std::vector<ResultRow> rows;
    for (std::vector<ResultRow>& chunk : results) {
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    }
    double worst = 0.0;
    std::size_t evaluated = 0;
    for (double r : residuals) {
        if (!std::isnan(r)) {
            worst = std::max(worst, r);
            ++evaluated;
        }
    }
    const bool failed = std::any_of(rows.begin(), rows.end(), is_failure);
    const bool breach = worst > kGaugeTolerance;
    ResultRow summary = base_row({kNaN, kNaN, kNaN, kNaN}, "gauge_summary", "max_entropy_residual",
                                 "quadrature");
    summary.value = worst;
    summary.error_estimate = 0.0;
    summary.status = breach ? "warning:tolerance_breach" : "ok";
    rows.push_back(summary);
    if (f.strict && std::any_of(rows.begin(), rows.end(), is_skip)) {
        err << "qgeom: gauge grid contains invalid points\n";
        return kExitUsage;
    }
    write_rows(out, rows, output_options(f));
    err << "gauge: max |a Ent_{q,a} - Ent_{q,1}| = " << format_number(worst, 3) << " over "
        << evaluated << " points (tolerance " << format_number(kGaugeTolerance, 3) << ")\n";
    return (failed || breach) ? kExitNumerical : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"q-Gaussian information geometry toolkit"};
    app.name("qgeom");
    app.require_subcommand(1);

    // fn
    std::string fn_name;
    double fn_q = 1.0, fn_a = 1.0, fn_mu = 0.0, fn_sigma = 1.0;
    double fn_t = 0.0, fn_tau = 0.0, fn_x = 0.0;
    int fn_digits = 17;
    CLI::App* fn = app.add_subcommand("fn", "evaluate one function at a point");
    fn->add_option("name", fn_name, "ln_q, exp_q, ln_qa, exp_qa, chi_qa, density or likelihood")
        ->required()
        ->check(CLI::IsMember({"ln_q", "exp_q", "ln_qa", "exp_qa", "chi_qa", "density", "likelihood"}));
    fn->add_option("--q", fn_q, "deformation q");
    fn->add_option("--a", fn_a, "refinement a");
    fn->add_option("--mu", fn_mu, "location");
    fn->add_option("--sigma", fn_sigma, "scale");
    CLI::Option* t_opt = fn->add_option("--t", fn_t, "argument of ln_q, ln_qa, chi_qa");
    CLI::Option* tau_opt = fn->add_option("--tau", fn_tau, "argument of exp_q, exp_qa");
    CLI::Option* x_opt = fn->add_option("--x", fn_x, "argument of density, likelihood");
    fn->add_option("--digits", fn_digits, "significant digits")->check(CLI::Range(1, 17));

    // table
    CommonFlags table_flags;
    std::string table_quantity;
    CLI::App* table = app.add_subcommand("table", "tabulate a quantity over a parameter grid");
    table->add_option("quantity", table_quantity, "entropy, cross, divergence, metric, cubic, phi")
        ->required()
        ->check(CLI::IsMember({"entropy", "cross", "divergence", "metric", "cubic", "phi"}));
    add_grid_flags(table, table_flags);
    add_output_flags(table, table_flags);
    add_numeric_flags(table, table_flags);
    table->add_option("--mu-r", table_flags.mu_r, "reference mu values (cross, divergence)");
    table->add_option("--sigma-r", table_flags.sigma_r, "reference sigma values (cross, divergence)");
    table->add_option("--n", table_flags.n, "phi: n values");
    table->add_option("--k", table_flags.k, "phi: k values");
    table->add_option("--j", table_flags.j, "phi: j values");
    table->add_option("--method", table_flags.method, "auto, closed_form or quadrature")
        ->check(CLI::IsMember({"auto", "closed_form", "quadrature"}));

    // gauge
    CommonFlags gauge_flags;
    CLI::App* gauge = app.add_subcommand("gauge", "entropy gauge identity and divergence separation");
    add_grid_flags(gauge, gauge_flags);
    add_output_flags(gauge, gauge_flags);
    add_numeric_flags(gauge, gauge_flags);
    gauge->add_option("--mu-r", gauge_flags.mu_r, "reference mu (default: mu of p)");
    gauge->add_option("--sigma-r", gauge_flags.sigma_r, "fit reference sigma (default 2)");
    gauge->add_option("--lambda", gauge_flags.lambda, "extra lambda values to report residuals for");

    // validate
    CommonFlags validate_flags;
    std::string level = "quick";
    std::vector<std::string> only;
    CLI::App* validate = app.add_subcommand("validate", "run the closed-form-vs-oracle invariants");
    validate->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--format", validate_flags.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    validate->add_option("--jobs", validate_flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    validate->add_option("--only", only, "run only the named invariants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (fn->parsed()) {
            auto opt = [](CLI::Option* o, double v) {
                return o->count() > 0 ? std::optional<double>(v) : std::nullopt;
            };
            return cmd_fn(fn_name, fn_q, fn_a, opt(t_opt, fn_t), opt(tau_opt, fn_tau),
                          opt(x_opt, fn_x), fn_mu, fn_sigma, fn_digits, out);
        }
        if (table->parsed()) {
            return cmd_table(table_quantity, table_flags, out, err);
        }
        if (gauge->parsed()) {
            return cmd_gauge(gauge_flags, out, err);
        }
        const Format format = validate_flags.format == "json" ? Format::json : Format::csv;
        return cmd_validate(level, only, format, validate_flags.jobs, out, err);
    } catch (const UsageError& e) {
        err << "qgeom: usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "qgeom: domain error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "qgeom: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace qgeom::cli
