#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "checks.hpp"
#include "cli.hpp"
#include "json.hpp"

using namespace qgeom;
using namespace qgeom::cli;
using doctest::Approx;

namespace {

struct Invocation {
    int exit_code = -1;
    std::string out;
};

// Runs the installed binary; stderr is discarded so stdout stays parseable.
Invocation tool(const std::string& args) {
    const std::string command = std::string(QGEOM_TOOL_PATH) + " " + args + " 2>/dev/null";
    Invocation inv;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        inv.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    inv.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return inv;
}

// In-process run, for exit codes and streams without spawning.
Invocation in_process(std::vector<std::string> args) {
    args.insert(args.begin(), "qgeom");
    std::vector<const char*> argv;
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Invocation inv;
    inv.exit_code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    inv.out = out.str();
    return inv;
}

std::vector<ResultRow> rows_of(const std::string& csv) {
    std::istringstream in(csv);
    return parse_csv(in);
}

}  // namespace

TEST_CASE("grid value expansion") {
    CHECK(expand_values({"2", "1"}, "--q") == std::vector<double>{1.0, 2.0});
    CHECK(expand_values({"1:2:0.5"}, "--q") == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(expand_values({"1:2:0.5", "1.5"}, "--q") == std::vector<double>{1.0, 1.5, 2.0});
    // Rounding must not drop the upper end.
    CHECK(expand_values({"0:0.3:0.1"}, "--a").size() == 4);
    CHECK_THROWS_AS(expand_values({"x"}, "--q"), UsageError);
    CHECK_THROWS_AS(expand_values({"2:1:0.5"}, "--q"), UsageError);
    CHECK_THROWS_AS(expand_values({"1:2:0"}, "--q"), UsageError);
    CHECK_THROWS_AS(expand_values({"1:2"}, "--q"), UsageError);
    CHECK_THROWS_AS(expand_values({"0:1e9:1"}, "--q"), UsageError);
}

TEST_CASE("tolerance precedence: flag over environment over default") {
    const QuadratureConfig defaults = resolve_tolerances({}, nullptr);
    CHECK(defaults.abs_tol == 1e-10);
    CHECK(defaults.rel_tol == 1e-9);
    CHECK(defaults.max_evaluations == 200000);

    const QuadratureConfig env_abs = resolve_tolerances({}, "1e-6");
    CHECK(env_abs.abs_tol == 1e-6);
    CHECK(env_abs.rel_tol == 1e-9);

    const QuadratureConfig env_both = resolve_tolerances({}, "1e-6,1e-5");
    CHECK(env_both.rel_tol == 1e-5);

    ToleranceFlags flags;
    flags.abs_tol = 1e-12;
    flags.max_evaluations = 50000;
    const QuadratureConfig mixed = resolve_tolerances(flags, "1e-6,1e-5");
    CHECK(mixed.abs_tol == 1e-12);
    CHECK(mixed.rel_tol == 1e-5);
    CHECK(mixed.max_evaluations == 50000);

    CHECK_THROWS_AS(resolve_tolerances({}, "abc"), UsageError);
    CHECK_THROWS_AS(resolve_tolerances({}, "1,2,3"), UsageError);
    flags.abs_tol = -1.0;
    CHECK_THROWS_AS(resolve_tolerances(flags, nullptr), UsageError);
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) {
        CHECK(h == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 4,
                                 [](std::size_t i) {
                                     if (i == 7) {
                                         throw UsageError("boom");
                                     }
                                 }),
                    UsageError);
}

TEST_CASE("CSV round trip keeps every field, including non-finite values") {
    ResultRow a;
    a.q = 1.5;
    a.a = 0.5;
    a.mu = -0.25;
    a.sigma = 2.0;
    a.quantity = "cross";
    a.component = "mu_r=1;sigma_r=3";
    a.value = 0.1 + 0.2;
    a.error_estimate = 1.25e-12;
    a.method = "quadrature";
    a.status = "ok";
    ResultRow b = a;
    b.component = "needs, \"quoting\"";
    b.value = std::numeric_limits<double>::quiet_NaN();
    b.error_estimate = std::numeric_limits<double>::infinity();
    b.status = "skipped:domain_error";

    std::ostringstream out;
    write_rows(out, {a, b}, OutputOptions{});
    CHECK(out.str().rfind("# generated ", 0) == 0);
    const std::vector<ResultRow> back = rows_of(out.str());
    REQUIRE(back.size() == 2);
    CHECK(back[0] == a);
    CHECK(back[1].component == b.component);
    CHECK(std::isnan(back[1].value));
    CHECK(std::isinf(back[1].error_estimate));
    CHECK(back[1].status == b.status);

    OutputOptions bare;
    bare.timestamp = false;
    std::ostringstream plain;
    write_rows(plain, {a}, bare);
    CHECK(plain.str().rfind("q,a,mu,sigma,", 0) == 0);
}

TEST_CASE("JSON output rounds to the requested digits and nulls non-finite values") {
    ResultRow r;
    r.quantity = "entropy";
    r.component = "Ent";
    r.value = 1.0 / 3.0;
    r.error_estimate = std::numeric_limits<double>::quiet_NaN();
    OutputOptions opts;
    opts.format = Format::json;
    opts.digits = 4;
    std::ostringstream out;
    write_rows(out, {r}, opts);
    const nlohmann::json j = nlohmann::json::parse(out.str());
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["value"].get<double>() == 0.3333);
    CHECK(j[0]["error_estimate"].is_null());
    CHECK(j[0]["component"] == "Ent");
}

TEST_CASE("fn evaluates the elementary functions") {
    auto value = [](const std::string& args) {
        const Invocation inv = tool("fn " + args);
        REQUIRE(inv.exit_code == 0);
        return std::strtod(inv.out.c_str(), nullptr);
    };
    CHECK(value("ln_q --q 2 --t 0.5") == Approx(-1.0).epsilon(1e-15));
    CHECK(value("exp_q --q 2 --tau -1") == Approx(0.5).epsilon(1e-15));
    CHECK(value("density --q 1 --mu 0 --sigma 1 --x 0") == Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(value("ln_qa --q 2 --a 2 --t 0.5") == Approx(-0.5).epsilon(1e-15));
    // -(1/2) (ln 2)^2
    CHECK(value("ln_qa --q 1 --a 2 --t 0.5") ==
          Approx(-0.5 * std::log(2.0) * std::log(2.0)).epsilon(1e-15));
    CHECK(value("likelihood --q 1 --x 1") ==
          Approx(-0.5 - 0.5 * std::log(2.0 * 3.141592653589793)).epsilon(1e-15));

    CHECK(tool("fn ln_q --q 2").exit_code == 2);           // missing --t
    CHECK(tool("fn ln_q --q 2 --t -1").exit_code == 2);    // outside the domain
    CHECK(tool("fn nonsense --t 1").exit_code == 2);
    CHECK(tool("--help").exit_code == 0);
    CHECK(tool("").exit_code == 2);
}

TEST_CASE("table metric reproduces the Fisher metric of the Gaussian") {
    const Invocation inv = tool("table metric --no-header");
    REQUIRE(inv.exit_code == 0);
    CHECK(inv.out.rfind("q,a,mu,sigma,", 0) == 0);
    const std::vector<ResultRow> rows = rows_of(inv.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].component == "g_mumu");
    CHECK(rows[0].value == Approx(1.0).epsilon(1e-12));
    CHECK(rows[1].component == "g_musigma");
    CHECK(std::abs(rows[1].value) <= 1e-12);
    CHECK(rows[2].component == "g_sigmasigma");
    CHECK(rows[2].value == Approx(2.0).epsilon(1e-12));
    for (const ResultRow& r : rows) {
        CHECK(r.status == "ok");
        CHECK(r.method == "closed_form");
    }
}

TEST_CASE("table entropy and divergence") {
    const Invocation ent = tool("table entropy --no-header");
    REQUIRE(ent.exit_code == 0);
    const std::vector<ResultRow> e = rows_of(ent.out);
    REQUIRE(e.size() == 1);
    CHECK(e[0].value == Approx(0.5 * std::log(2.0 * 3.141592653589793 * 2.718281828459045))
                            .epsilon(1e-9));

    const Invocation div = tool("table divergence --no-header --q 1.5 --a 2");
    REQUIRE(div.exit_code == 0);
    const std::vector<ResultRow> d = rows_of(div.out);
    REQUIRE(d.size() == 1);
    CHECK(std::abs(d[0].value) <= 1e-9);
    CHECK(d[0].component == "mu_r=0;sigma_r=1");
}

TEST_CASE("table grids, ordering and skip reasons") {
    const Invocation inv =
        tool("table metric --no-header --q 2.5 --q 1 --a 2 --a 0.5 --sigma 1 --jobs 3");
    REQUIRE(inv.exit_code == 0);
    const std::vector<ResultRow> rows = rows_of(inv.out);
    REQUIRE(rows.size() == 12);
    // Lexicographic in (q, a, mu, sigma) regardless of flag order or threads.
    CHECK(rows.front().q == 1.0);
    CHECK(rows.front().a == 0.5);
    CHECK(rows.back().q == 2.5);
    CHECK(rows.back().a == 2.0);

    const std::vector<ResultRow> skipped = rows_of(tool("table entropy --no-header --q 3.5").out);
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0].status == "skipped:q_out_of_range");
    CHECK(std::isnan(skipped[0].value));
    CHECK(tool("table entropy --q 3.5 --strict").exit_code == 2);

    const std::vector<ResultRow> closed =
        rows_of(tool("table entropy --no-header --a 2 --method closed_form").out);
    REQUIRE(closed.size() == 1);
    CHECK(closed[0].status == "skipped:no_closed_form");

    const std::vector<ResultRow> phi =
        rows_of(tool("table phi --no-header --q 1 --n 3 --k 3 --j 1").out);
    REQUIRE(phi.size() == 1);
    CHECK(phi[0].component == "n=3;k=3;j=1");
    CHECK(phi[0].value == Approx(4.0389653171242858).epsilon(1e-12));
}

TEST_CASE("an impossible quadrature budget exits 3") {
    const Invocation inv =
        tool("table cross --no-header --q 2.5 --a 2 --sigma-r 4 --mu-r 3 --max-evals 1000 "
             "--abs-tol 1e-15 --rel-tol 1e-15");
    CHECK(inv.exit_code == 3);
    CHECK(inv.out.find("warning:not_converged") != std::string::npos);
}

TEST_CASE("gauge reports the entropy identity") {
    const Invocation inv = tool("gauge --no-header --q 2 --a 2 --sigma 1 --lambda 1");
    REQUIRE(inv.exit_code == 0);
    const std::vector<ResultRow> rows = rows_of(inv.out);
    REQUIRE(!rows.empty());
    CHECK(rows.back().quantity == "gauge_summary");
    CHECK(rows.back().value <= 1e-7);
    bool saw_separation = false;
    for (const ResultRow& r : rows) {
        if (r.component == "separation") {
            saw_separation = true;
            CHECK(r.value >= 1e3);
        }
    }
    CHECK(saw_separation);
}

TEST_CASE("validate quick passes and is byte-stable") {
    const Invocation first = in_process({"validate", "quick"});
    const Invocation second = in_process({"validate", "quick", "--jobs", "1"});
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.rfind("invariant,result,max_error,tolerance,cases,detail\n", 0) == 0);
    CHECK(in_process({"validate", "quick", "--only", "no_such_check"}).exit_code == 2);
}

TEST_CASE("every named check is reachable") {
    for (const Check& c : full_checks()) {
        CHECK(find_check(c.name).name == c.name);
    }
    CHECK_THROWS_AS(find_check("no_such_check"), std::out_of_range);
}
