// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "certint/darboux.hpp"
#include "certint/expr.hpp"
#include "certint/flatness.hpp"
#include "certint/interval.hpp"
#include "certint/parser.hpp"
#include "certint/volterra.hpp"
#include "support/random_expr.hpp"

using namespace certint;
using certint::gen::Rng;
using certint::gen::uniform;
using certint::gen::uniform_int;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Distance in ulps between two finite doubles of equal sign.
double ulps_apart(double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return std::fabs(a - b) / std::fabs(std::nextafter(a, b) - a);
}

Expr parsed(const char* s) { return parse(s); }

Outcome sandwich_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Expr> exemplars = {parsed("x^2/2"), parsed("sin(x)"), parsed("x*sin(3*x)"),
                                         parsed("exp(x)"), parsed("exp(-x^2)"), parsed("exp(sin(x))")};
    Rng rng(20240917);
    int passed = 0;
    constexpr int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        const Expr H = uniform_int(rng, 0, 3) == 0 ? exemplars[uniform_int(rng, 0, 5)]
                                                   : gen::random_polynomial(rng, 6);
        double a = uniform(rng, -2.0, 2.0);
        double b = uniform(rng, -2.0, 2.0);
        if (a > b) {
            std::swap(a, b);
        }
        if (a == b) {
            b = std::nextafter(a, 3.0);
        }
        const std::size_t blocks = static_cast<std::size_t>(uniform_int(rng, 2, 64));
        std::vector<double> pts{a, b};
        while (pts.size() < blocks + 1) {
            pts.push_back(uniform(rng, a, b));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        const SandwichVerdict v = sandwich_check(H, Interval(a, b), Partition(pts));
        passed += v.pass ? 1 : 0;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {passed == cases && secs < 10.0,
            std::to_string(passed) + "/" + std::to_string(cases) + " pass, runtime " + num(secs) + "s (target < 10s)"};
}

Outcome ftc_suite()
{
    struct Case {
        const char* H;
        Interval exact;  // encloses the exact increment on [0, 1]
    };
    // sin 1 = 0.84147098480789650665250232163029899962256306079837 (mpmath, 50 digits)
    const double sin1 = 0.8414709848078965;
    const std::vector<Case> cases = {
        {"x^3/3", *div(Interval(1.0), Interval(3.0))},
        {"x^2/2", Interval(0.5)},
        {"sin(x)", Interval(std::nextafter(sin1, 0.0), std::nextafter(sin1, 1.0))},
    };
    std::string detail;
    bool ok = true;
    for (const auto& c : cases) {
        const Interval br = ftc_reconstruct(parse(c.H), Interval(0.0, 1.0), 1e-5);
        const bool good = br.width() <= 1e-5 && br.contains(c.exact);
        ok = ok && good;
        detail += std::string(c.H) + " -> " + to_string(br) + (good ? " ok; " : " BAD; ");
    }
    return {ok, detail};
}

Outcome uniform_closed_forms()
{
    const ExprOracle f(Expr::variable());
    bool ok = true;
    double worst = 0.0;
    for (const std::size_t n : {4u, 16u, 256u}) {
        const Partition p = Partition::uniform(0.0, 1.0, n);
        const double nd = static_cast<double>(n);
        const double lo_exact = (nd - 1.0) / (2.0 * nd);
        const double hi_exact = (nd + 1.0) / (2.0 * nd);
        const double dl = ulps_apart(lower_sum(f, p), lo_exact);
        const double du = ulps_apart(upper_sum(f, p), hi_exact);
        worst = std::max({worst, dl, du});
        ok = ok && dl <= 8.0 && du <= 8.0;
    }
    return {ok, "max deviation " + num(worst) + " ulps (limit 8)"};
}

Outcome gap_persistence()
{
    const auto d = ConstantBoundsOracle::dirichlet();
    const DarbouxEnclosure e = enclose(d, Interval(0.0, 1.0), 1e-6, 10000);
    const double lower = e.lower_integral.lo();
    const double upper = e.upper_integral.hi();
    const bool ok = e.refinement_steps == 10000 && !e.converged() && lower <= 1e-12 && upper >= 1.0 - 1e-12;
    return {ok, "after " + std::to_string(e.refinement_steps) + " refinements lower " + num(lower) + ", upper " +
                    num(upper) + ", status " + to_string(e.status)};
}

Outcome flatness_rigidity()
{
    bool ok = true;
    std::string detail;
    for (const char* src : {"exp(-1/x)", "exp(-2/x)", "exp(-5/x)"}) {
        for (const int n : {4, 10}) {
            const ConditionReport r = check_uno(FlatCandidate({parse(src), true}, 1.0), n);
            const bool good = r.status == ConditionStatus::certified && r.delta && *r.delta > 0.0;
            ok = ok && good;
            if (!good) {
                detail += std::string(src) + " uno n=" + std::to_string(n) + " " + to_string(r.status) + "; ";
            }
        }
        for (const double C : {1.0, 10.0, 100.0}) {
            const FlatCandidate cand({parse(src), true}, C);
            const ConditionReport r = check_stoica(cand);
            const bool good = r.status == ConditionStatus::falsified && witness_reverifies(cand, r);
            ok = ok && good;
            if (!good) {
                detail += std::string(src) + " stoica C=" + num(C) + " " + to_string(r.status) + "; ";
            }
        }
    }
    const FlatCandidate c10({parse("exp(-1/x)"), true}, 10.0);
    const ConditionReport w = check_stoica(c10);
    const bool witness_ok = w.witness && *w.witness < 0.1;
    ok = ok && witness_ok;
    detail += "exp(-1/x), C=10 witness " + (w.witness ? num(*w.witness) : std::string("none")) + "; ";

    for (const double C : {1.0, 10.0, 100.0}) {
        const FlatCandidate zero(Expr::constant(0.0), C);
        bool good = check_zero(zero).status == ConditionStatus::certified &&
                    check_stoica(zero).status == ConditionStatus::certified;
        for (const int n : {4, 10}) {
            good = good && check_uno(zero, n).status == ConditionStatus::certified;
        }
        ok = ok && good;
        if (!good) {
            detail += "f = 0 fails at C=" + num(C) + "; ";
        }
    }
    detail += ok ? "all families behave as stated" : "";
    return {ok, detail};
}

// Root of 1/x + 10 ln x = 0 on (0, 1/10), where the left side decreases.
double delta10_root()
{
    long double lo = 0.001L;
    long double hi = 0.1L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        const long double g = 1.0L / mid + 10.0L * std::log(mid);
        (g > 0 ? lo : hi) = mid;
    }
    return static_cast<double>(lo);
}

Outcome delta_anchor()
{
    const double root = delta10_root();
    const ConditionReport r = check_uno(FlatCandidate({parse("exp(-1/x)"), true}, 1.0), 10);
    if (!r.delta) {
        return {false, "no delta certified"};
    }
    const double d = *r.delta;
    const bool ok = d >= 0.02 && d <= 0.05 && d <= root && root - d < 1e-3;
    return {ok, "delta_10 = " + num(d) + ", root = " + num(root)};
}

Outcome level_set_location()
{
    const FlatCandidate cubic(parse("x^3"), 1.0);
    const MinLevelSet m5 = locate_min_en(cubic, 5);
    const MinLevelSet m2 = locate_min_en(cubic, 2);
    const bool ok5 = m5.status == LevelSetStatus::bracket && m5.x_bar && m5.x_bar->contains(1.0) &&
                     m5.x_bar->width() <= 0x1p-30;
    const bool ok2 = m2.status == LevelSetStatus::empty && !m2.x_bar;
    return {ok5 && ok2, "n=5 " + (m5.x_bar ? to_string(*m5.x_bar) : std::string("none")) + " (" +
                            to_string(m5.status) + "), n=2 " + to_string(m2.status)};
}

Outcome soundness_fuzz()
{
    Rng rng(8675309);
    int checked = 0;
    int violations = 0;
    int indeterminate = 0;
    int undefined = 0;
    constexpr int triples = 10000;
    for (int i = 0; i < triples; ++i) {
        const Expr e = gen::random_expr(rng, 4);
        double lo = uniform(rng, -4.0, 4.0);
        double hi = lo + uniform(rng, 0.0, 2.0) * (uniform_int(rng, 0, 3) == 0 ? 1e-6 : 1.0);
        const double x = uniform_int(rng, 0, 9) == 0 ? (uniform_int(rng, 0, 1) ? lo : hi) : uniform(rng, lo, hi);
        double p = 0.0;
        try {
            p = eval_point(e, x);
        } catch (const DomainError&) {
            ++undefined;
            continue;
        }
        std::optional<Interval> r;
        try {
            r = eval_interval(e, Interval(lo, hi));
        } catch (const DomainError&) {
            ++undefined;
            continue;
        }
        if (!r) {
            ++indeterminate;
            continue;
        }
        ++checked;
        if (!std::isnan(p) && !r->contains(p)) {
            ++violations;
        }
    }
    return {violations == 0 && checked > triples / 2,
            std::to_string(violations) + " violations in " + std::to_string(checked) + " checked triples (" +
                std::to_string(indeterminate) + " indeterminate, " + std::to_string(undefined) + " undefined)"};
}

Outcome derivative_check()
{
    Rng rng(1234567);
    std::vector<std::pair<ExtendedExpr, Interval>> fns;
    for (int i = 0; i < 100; ++i) {
        fns.emplace_back(gen::random_polynomial_tree(rng, 4), Interval(-1.5, 1.5));
    }
    for (const char* s : {"x^2/2", "x^3/3", "sin(x)", "x^3", "0", "x*sin(3*x)", "exp(-x^2)", "exp(sin(x))"}) {
        fns.emplace_back(parse(s), Interval(-1.5, 1.5));
    }
    for (const char* s : {"exp(-1/x)", "exp(-2/x)", "exp(-5/x)"}) {
        fns.emplace_back(ExtendedExpr{parse(s), true}, Interval(0.0, 1.0));
    }
    double worst = 0.0;
    int points = 0;
    for (const auto& [f, dom] : fns) {
        const ExtendedExpr df = differentiate(f);
        for (int k = 1; k <= 20; ++k) {
            const double x = dom.lo() + (dom.hi() - dom.lo()) * k / 21.0;
            const double h = 1e-5 * std::max(1.0, std::fabs(x));
            const double fd = (eval_point(f, x + h) - eval_point(f, x - h)) / (2.0 * h);
            const double d = eval_point(df, x);
            const double err = std::fabs(fd - d) / std::max(1.0, std::fabs(d));
            worst = std::max(worst, err);
            ++points;
        }
    }
    return {worst <= 1e-4, std::to_string(fns.size()) + " functions, " + std::to_string(points) +
                                " points, max relative error " + num(worst) + " (limit 1e-4)"};
}

} // namespace

int main()
{
    report(1, "sandwich suite", sandwich_suite);
    report(2, "FTC reconstruction", ftc_suite);
    report(3, "uniform-partition closed forms", uniform_closed_forms);
    report(4, "gap persistence", gap_persistence);
    report(5, "flatness rigidity", flatness_rigidity);
    report(6, "delta_10 anchor", delta_anchor);
    report(7, "E_n location", level_set_location);
    report(8, "soundness fuzz", soundness_fuzz);
    report(9, "derivative check", derivative_check);
    return failures == 0 ? 0 : 1;
}
