#include "certint/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "certint/darboux.hpp"

namespace certint {

using namespace rounding;

namespace {

constexpr std::size_t kUnoBudget = 20000;          // interval evaluations per delta attempt
constexpr std::size_t kStoicaBudget = 200000;
constexpr std::size_t kScanBudget = 2000000;
constexpr int kDeltaRefinements = 24;
constexpr int kStoicaSamples = 10000;
constexpr double kChainTolerance = 1e-4;
constexpr std::size_t kChainMaxSteps = 400000;

const Expr kX = Expr::variable();

Expr c(double v) { return Expr::constant(v); }

// a > b by more than the witness margin.
bool clearly_exceeds(double a, double b)
{
    return std::isfinite(a) && a > widen_up(b, kWitnessMarginUlps);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Dyadic blocks [lo, 2 lo] covering [start, end]; the last ends at `end`.
std::vector<Interval> dyadic_blocks(double start, double end)
{
    std::vector<Interval> out;
    if (start == end) {
        out.emplace_back(start);
        return out;
    }
    double lo = start;
    while (lo < end) {
        const double hi = std::min(end, 2.0 * lo);
        out.emplace_back(lo, hi);
        lo = hi;
    }
    return out;
}

enum class ProofResult { proved, refuted, exhausted };

// Proves e > 0 (strict) or e >= 0 on every block by adaptive bisection.
ProofResult prove_sign(const Expr& e, const std::vector<Interval>& blocks, bool strict, std::size_t budget)
{
    std::size_t evals = 0;
    for (const Interval& root : blocks) {
        std::vector<Interval> stack{root};
        while (!stack.empty()) {
            const Interval b = stack.back();
            stack.pop_back();
            if (++evals > budget) {
                return ProofResult::exhausted;
            }
            std::optional<Interval> r;
            try {
                r = eval_interval(e, b);
            } catch (const DomainError&) {
                return ProofResult::exhausted;
            }
            if (r) {
                if (strict ? r->lo() > 0.0 : r->lo() >= 0.0) {
                    continue;
                }
                if (strict ? r->hi() <= 0.0 : r->hi() < 0.0) {
                    return ProofResult::refuted;
                }
            }
            const double mid = b.mid();
            if (!(b.lo() < mid && mid < b.hi()) || b.width() < std::ldexp(b.lo(), -40)) {
                return ProofResult::exhausted;
            }
            stack.emplace_back(mid, b.hi());
            stack.emplace_back(b.lo(), mid);
        }
    }
    return ProofResult::proved;
}

// |f(x)| < x^n on (0, tau] for the family, decided with interval arithmetic.
bool uno_tail_holds(const ExemplarFamily& fam, int n, double tau)
{
    const Interval t(tau);
    const Interval scale = abs(Interval(fam.scale));
    switch (fam.kind) {
    case ExemplarFamily::Kind::zero:
        return true;
    case ExemplarFamily::Kind::power: {
        // |c| x^k < x^n  <=>  |c| x^(k-n) < 1; for k > n the left side grows with x.
        if (fam.k < n) {
            return false;
        }
        if (fam.k == n) {
            return scale.hi() < 1.0;
        }
        return (scale * *pow(t, fam.k - n)).hi() < 1.0;
    }
    case ExemplarFamily::Kind::flat_exp: {
        // |c| e^(-a/x) < x^n  <=>  a > x (n ln(1/x) + ln|c|). x ln(1/x) is increasing
        // on (0, 1/e), so checking at tau suffices.
        if (tau >= std::exp(-1.0)) {
            return false;
        }
        Interval rhs = Interval(static_cast<double>(n)) * (-log(t));
        if (scale.hi() > 1.0) {
            rhs = rhs + log(scale);
        }
        rhs = t * rhs;
        return fam.a > rhs.hi();
    }
    }
    return false;
}

// |f(x)| - x^n has no zero on (0, tau].
bool level_set_tail_empty(const ExemplarFamily& fam, int n, double tau)
{
    if (uno_tail_holds(fam, n, tau)) {
        return true;
    }
    if (fam.kind == ExemplarFamily::Kind::power && fam.k < n) {
        // |c| x^k > x^n  <=>  |c| x^(k-n) > 1, smallest at x = tau.
        return (abs(Interval(fam.scale)) * *pow(Interval(tau), fam.k - n)).lo() > 1.0;
    }
    return false;
}

Expr below_power_margin(const Expr& f, int n) { return pow(kX, n) - abs(f); }

double point_abs(const ExtendedExpr& f, double x) { return std::fabs(eval_point(f, x)); }

} // namespace

FlatCandidate::FlatCandidate(ExtendedExpr fn, double constant) : f(std::move(fn)), C(constant)
{
    if (!std::isfinite(C) || !(C > 0.0)) {
        throw std::invalid_argument("FlatCandidate: C must be finite and positive");
    }
}

std::optional<ExemplarFamily> recognize_family(const Expr& e)
{
    using Kind = ExemplarFamily::Kind;
    switch (e.op()) {
    case Op::constant:
        if (e.value() == 0.0) {
            return ExemplarFamily{Kind::zero};
        }
        return std::nullopt;
    case Op::variable:
        return ExemplarFamily{Kind::power, 1.0, 1};
    case Op::pow_int:
        if (e.lhs().op() == Op::variable && e.exponent() >= 1) {
            return ExemplarFamily{Kind::power, 1.0, e.exponent()};
        }
        return std::nullopt;
    case Op::exp: {
        const Expr arg = e.lhs();
        if (arg.op() == Op::div && arg.lhs().is_constant() && arg.rhs().op() == Op::variable &&
            arg.lhs().value() < 0.0) {
            return ExemplarFamily{Kind::flat_exp, 1.0, 0, -arg.lhs().value()};
        }
        return std::nullopt;
    }
    case Op::mul: {
        Expr k = e.lhs();
        Expr rest = e.rhs();
        if (!k.is_constant()) {
            std::swap(k, rest);
        }
        if (!k.is_constant() || k.value() == 0.0 || !std::isfinite(k.value())) {
            return std::nullopt;
        }
        auto inner = recognize_family(rest);
        if (!inner || inner->kind == Kind::zero) {
            return std::nullopt;
        }
        inner->scale *= k.value();
        return inner;
    }
    default:
        return std::nullopt;
    }
}

std::string to_string(Condition c)
{
    switch (c) {
    case Condition::zero:
        return "zero";
    case Condition::uno:
        return "uno";
    case Condition::stoica:
        return "stoica";
    }
    return "unknown";
}

std::string to_string(ConditionStatus s)
{
    switch (s) {
    case ConditionStatus::certified:
        return "certified";
    case ConditionStatus::certified_modulo_tail:
        return "certified-modulo-tail";
    case ConditionStatus::falsified:
        return "falsified";
    case ConditionStatus::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

std::string to_string(LevelSetStatus s)
{
    switch (s) {
    case LevelSetStatus::empty:
        return "empty";
    case LevelSetStatus::bracket:
        return "bracket";
    case LevelSetStatus::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

std::string to_string(StepStatus s)
{
    switch (s) {
    case StepStatus::verified:
        return "verified";
    case StepStatus::consistent:
        return "consistent";
    case StepStatus::justified:
        return "justified";
    case StepStatus::unverified:
        return "unverified";
    case StepStatus::unjustified:
        return "unjustified";
    case StepStatus::refuted:
        return "refuted";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Conditions

ConditionReport check_zero(const FlatCandidate& cand)
{
    ConditionReport r;
    r.condition = Condition::zero;
    double v = 0.0;
    try {
        v = eval_point(cand.f, 0.0);
    } catch (const DomainError& e) {
        r.status = ConditionStatus::inconclusive;
        r.detail = std::string("f is undefined at 0 (") + e.what() + "); consider zero-extension";
        return r;
    }
    if (v == 0.0) {
        r.status = ConditionStatus::certified;
        r.detail = cand.f.zero_extended ? "f(0) = 0 by zero-extension" : "f(0) evaluates to exactly 0";
    } else {
        r.status = ConditionStatus::falsified;
        r.witness = 0.0;
        r.detail = "f(0) = " + fmt(v);
    }
    return r;
}

ConditionReport check_uno(const FlatCandidate& cand, int n)
{
    if (n <= 1) {
        throw std::invalid_argument("check_uno: n must be greater than 1");
    }
    ConditionReport r;
    r.condition = Condition::uno;
    r.n = n;

    const Expr margin = below_power_margin(cand.f.base, n);
    auto certify = [&](double delta) {
        return prove_sign(margin, dyadic_blocks(kTailFloor, delta), true, kUnoBudget) == ProofResult::proved;
    };

    std::optional<double> good;
    double bad = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double delta = std::ldexp(1.0, -k);
        if (certify(delta)) {
            good = delta;
            bad = 2.0 * delta;
            break;
        }
    }

    if (good) {
        if (*good == 0.5 && certify(1.0)) {
            good = 1.0;
        } else {
            for (int i = 0; i < kDeltaRefinements && bad - *good > std::ldexp(*good, -12); ++i) {
                const double mid = *good + (bad - *good) / 2.0;
                if (certify(mid)) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        }
        r.delta = *good;
        const auto fam = recognize_family(cand.f.base);
        if (fam && uno_tail_holds(*fam, n, kTailFloor)) {
            r.status = ConditionStatus::certified;
            r.detail = "|f(x)| < x^" + std::to_string(n) + " on (0, " + fmt(*good) +
                       "]; blocks proved on [2^-40, delta], tail by closed form";
        } else {
            r.status = ConditionStatus::certified_modulo_tail;
            r.detail = "|f(x)| < x^" + std::to_string(n) + " proved on [2^-40, " + fmt(*good) +
                       "]; (0, 2^-40) not covered";
        }
        return r;
    }

    // No delta: look for violations at every dyadic scale down to the tail floor.
    std::optional<double> smallest;
    int violated_levels = 0;
    for (int k = 1; k <= 40; ++k) {
        const double x = std::ldexp(1.0, -k);
        try {
            if (clearly_exceeds(point_abs(cand.f, x), std::pow(x, n))) {
                ++violated_levels;
                smallest = x;
            }
        } catch (const DomainError&) {
        }
    }
    if (violated_levels == 40) {
        r.status = ConditionStatus::falsified;
        r.witness = smallest;
        r.detail = "|f(x)| >= x^" + std::to_string(n) + " at x = 2^-k for every k = 1..40";
    } else {
        r.status = ConditionStatus::inconclusive;
        r.witness = smallest;
        r.detail = "no delta certified and no violation at every scale";
    }
    return r;
}

ConditionReport check_stoica(const FlatCandidate& cand)
{
    ConditionReport r;
    r.condition = Condition::stoica;
    const ExtendedExpr df = differentiate(cand.f);
    const double C = cand.C;

    // For exp(-a/x) the ratio is a/x, so a/(2C) violates by a factor 2.
    const auto fam = recognize_family(cand.f.base);
    if (fam && fam->kind == ExemplarFamily::Kind::flat_exp) {
        r.status = ConditionStatus::falsified;
        r.witness = std::min(1.0, fam->a / (2.0 * C));
        r.detail = "ratio |x f'/f| = a/x = " + fmt(fam->a / *r.witness) + " > C at x = " + fmt(*r.witness);
        if (witness_reverifies(cand, r)) {
            return r;
        }
        r.witness.reset();
    }

    // Dense sampling: a uniform grid and a log-spaced grid down to 2^-40.
    std::vector<double> samples;
    samples.reserve(kStoicaSamples);
    const int half = kStoicaSamples / 2;
    for (int i = 1; i <= half; ++i) {
        samples.push_back(static_cast<double>(i) / half);
    }
    for (int j = 0; j < half; ++j) {
        samples.push_back(std::exp2(-40.0 * (1.0 - static_cast<double>(j) / half)));
    }
    std::sort(samples.begin(), samples.end());

    std::optional<double> witness;
    std::optional<double> fallback;
    for (const double x : samples) {
        double fx = 0.0;
        double dfx = 0.0;
        try {
            fx = eval_point(cand.f, x);
            dfx = eval_point(df, x);
        } catch (const DomainError&) {
            continue;
        }
        if (clearly_exceeds(std::fabs(x * dfx), C * std::fabs(fx))) {
            if (std::fabs(fx) >= std::numeric_limits<double>::min()) {
                witness = x;
                break;
            }
            if (!fallback) {
                fallback = x;
            }
        }
    }
    if (!witness) {
        witness = fallback;
    }
    if (witness) {
        r.status = ConditionStatus::falsified;
        r.witness = witness;
        r.detail = "|x f'(x)| > C |f(x)| at x = " + fmt(*witness);
        return r;
    }

    if (fam) {
        switch (fam->kind) {
        case ExemplarFamily::Kind::zero:
            r.status = ConditionStatus::certified;
            r.detail = "f = 0: both sides vanish";
            return r;
        case ExemplarFamily::Kind::power:
            if (fam->k <= C) {
                r.status = ConditionStatus::certified;
                r.detail = "ratio |x f'/f| = " + std::to_string(fam->k) + " <= C on (0, 1]";
            } else {
                r.status = ConditionStatus::falsified;
                r.witness = 1.0;
                r.detail = "ratio |x f'/f| = " + std::to_string(fam->k) + " > C";
            }
            return r;
        case ExemplarFamily::Kind::flat_exp: {
            const double w = std::min(1.0, fam->a / (2.0 * C));
            r.status = ConditionStatus::falsified;
            r.witness = w;
            r.detail = "ratio |x f'/f| = a/x exceeds C for x < a/C; point values underflow at the witness";
            return r;
        }
        }
    }

    const Expr slack = c(C) * abs(cand.f.base) - abs(kX * df.base);
    const ProofResult proof = prove_sign(slack, dyadic_blocks(kStoicaFloor, 1.0), false, kStoicaBudget);
    if (proof == ProofResult::proved) {
        r.status = ConditionStatus::certified_modulo_tail;
        r.detail = "C|f| - |x f'| >= 0 proved on [2^-20, 1]; (0, 2^-20) not covered";
    } else {
        r.status = ConditionStatus::inconclusive;
        r.detail = "no violation sampled and no blockwise certificate on [2^-20, 1]";
    }
    return r;
}

bool witness_reverifies(const FlatCandidate& cand, const ConditionReport& report)
{
    if (report.status != ConditionStatus::falsified || !report.witness) {
        return false;
    }
    const double x = *report.witness;
    try {
        switch (report.condition) {
        case Condition::zero:
            return clearly_exceeds(point_abs(cand.f, x), 0.0);
        case Condition::uno:
            return clearly_exceeds(point_abs(cand.f, x), std::pow(x, report.n));
        case Condition::stoica: {
            const double dfx = eval_point(differentiate(cand.f), x);
            return clearly_exceeds(std::fabs(x * dfx), cand.C * point_abs(cand.f, x));
        }
        }
    } catch (const DomainError&) {
        return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// min E_n

namespace {

bool is_exact_zero(const std::optional<Interval>& v) { return v && v->lo() == 0.0 && v->hi() == 0.0; }

std::optional<Interval> try_eval(const Expr& e, const Interval& x)
{
    try {
        return eval_interval(e, x);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

} // namespace

MinLevelSet locate_min_en(const FlatCandidate& cand, int n) { return locate_min_en(cand, n, check_uno(cand, n)); }

MinLevelSet locate_min_en(const FlatCandidate& cand, int n, const ConditionReport& uno)
{
    if (n <= 1) {
        throw std::invalid_argument("locate_min_en: n must be greater than 1");
    }
    MinLevelSet out;
    const auto fam = recognize_family(cand.f.base);
    if (uno.certified() && uno.delta) {
        out.scan_start = *uno.delta;
        out.tail_verified = uno.status == ConditionStatus::certified;
    } else {
        out.scan_start = kTailFloor;
        out.tail_verified = fam && level_set_tail_empty(*fam, n, kTailFloor);
    }

    const Expr phi = abs(cand.f.base) - pow(kX, n);
    const Expr dphi = differentiate(phi);
    constexpr double end = 1.0;

    bool uncertain = false;
    std::vector<Interval> stack;
    {
        auto blocks = out.scan_start < end ? dyadic_blocks(out.scan_start, end)
                                           : std::vector<Interval>{Interval(end)};
        stack.assign(blocks.rbegin(), blocks.rend());
    }

    auto found = [&](const Interval& b) {
        out.x_bar = b;
        out.status = uncertain ? LevelSetStatus::inconclusive : LevelSetStatus::bracket;
        return out;
    };

    while (!stack.empty()) {
        if (++out.evaluations > kScanBudget) {
            out.status = LevelSetStatus::inconclusive;
            return out;
        }
        const Interval b = stack.back();
        stack.pop_back();

        const auto range = try_eval(phi, b);
        if (range && (range->lo() > 0.0 || range->hi() < 0.0)) {
            continue;
        }
        const bool narrow = b.width() <= kBracketWidth;
        const double mid = b.mid();
        const bool splittable = b.lo() < mid && mid < b.hi();
        auto bisect = [&] {
            stack.emplace_back(mid, b.hi());
            stack.emplace_back(b.lo(), mid);
        };

        const auto at_lo = try_eval(phi, Interval(b.lo()));
        const auto at_hi = try_eval(phi, Interval(b.hi()));
        const auto slope = try_eval(dphi, b);
        const bool increasing = slope && slope->lo() > 0.0;
        const bool decreasing = slope && slope->hi() < 0.0;

        // Exact zero at the left end (only possible at the scan start or just
        // after a touch from below).
        if (is_exact_zero(at_lo)) {
            if (decreasing) {
                continue;
            }
            if (increasing || narrow || !splittable) {
                return found(b);
            }
            bisect();
            continue;
        }
        if (is_exact_zero(at_hi)) {
            if (decreasing) {
                if (narrow || !splittable) {
                    return found(b);
                }
                bisect();
                continue;
            }
            if (increasing) {
                // |f| < x^n on [lo, hi); the next block decides whether this
                // is a crossing or a touch from below.
                if (b.hi() == end) {
                    out.tangency = b;
                }
                continue;
            }
        } else if (at_lo && at_hi && (increasing || decreasing)) {
            const Interval ends = hull(*at_lo, *at_hi);
            if (ends.lo() > 0.0 || ends.hi() < 0.0) {
                continue;
            }
        }

        const bool crossing = at_lo && at_hi &&
                              ((at_lo->hi() < 0.0 && at_hi->lo() > 0.0) || (at_lo->lo() > 0.0 && at_hi->hi() < 0.0));
        if (!narrow && splittable) {
            bisect();
            continue;
        }
        if (crossing) {
            return found(b);
        }
        uncertain = true;
    }
    out.status = uncertain ? LevelSetStatus::inconclusive : LevelSetStatus::empty;
    return out;
}

// ---------------------------------------------------------------------------
// Proof chain

std::optional<Interval> derivative_bound(const FlatCandidate& cand)
{
    const ExtendedExpr df = differentiate(cand.f);
    std::optional<Interval> total;
    for (const Interval& level : dyadic_blocks(kStoicaFloor, 1.0)) {
        const Partition p = Partition::uniform(level.lo(), level.hi(), 16);
        for (std::size_t i = 0; i < p.blocks(); ++i) {
            const auto r = try_eval(abs(df.base), p.block(i));
            if (!r || !r->is_finite()) {
                return std::nullopt;
            }
            total = total ? hull(*total, *r) : *r;
        }
    }
    return total;
}

namespace {

StepStatus compare_le(const Interval& lhs, const Interval& rhs)
{
    if (lhs.hi() <= rhs.lo()) {
        return StepStatus::verified;
    }
    return lhs.lo() <= rhs.hi() ? StepStatus::consistent : StepStatus::refuted;
}

StepStatus compare_lt(const Interval& lhs, const Interval& rhs)
{
    if (lhs.hi() < rhs.lo()) {
        return StepStatus::verified;
    }
    return lhs.lo() < rhs.hi() ? StepStatus::consistent : StepStatus::refuted;
}

StepStatus compare_eq(const Interval& lhs, const Interval& rhs)
{
    return lhs.overlaps(rhs) ? StepStatus::consistent : StepStatus::refuted;
}

// Status of a step justified by a hypothesis rather than by numerics.
StepStatus from_hypothesis(const ConditionReport& r)
{
    switch (r.status) {
    case ConditionStatus::certified:
    case ConditionStatus::certified_modulo_tail:
        return StepStatus::justified;
    case ConditionStatus::falsified:
        return StepStatus::unjustified;
    case ConditionStatus::inconclusive:
        return StepStatus::unverified;
    }
    return StepStatus::unverified;
}

// Combine a numeric comparison with the status of the hypothesis it uses.
StepStatus combine(StepStatus numeric, const ConditionReport& hyp)
{
    if (numeric == StepStatus::refuted) {
        return numeric;
    }
    if (hyp.status == ConditionStatus::falsified) {
        return StepStatus::unjustified;
    }
    return numeric;
}

std::string hypothesis_note(const ConditionReport& r)
{
    std::string s = to_string(r.condition) + " is " + to_string(r.status);
    if (r.witness) {
        s += " (witness x = " + fmt(*r.witness) + ")";
    }
    return s;
}

ChainStep make_step(std::string label, std::optional<Interval> lhs, std::string relation, std::optional<Interval> rhs)
{
    ChainStep s;
    s.label = std::move(label);
    s.lhs = lhs;
    s.relation = std::move(relation);
    s.rhs = rhs;
    return s;
}

std::optional<Interval> enclose_upper(const ExtendedExpr& integrand, const Interval& domain)
{
    const ExprOracle oracle(integrand);
    try {
        const DarbouxEnclosure enc = enclose(oracle, domain, kChainTolerance, kChainMaxSteps);
        if (!enc.upper_integral.is_finite()) {
            return std::nullopt;
        }
        return enc.upper_integral;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

// Bound on the integral of |f'| over [0, eps] for the exemplar families, where
// |f'| is non-decreasing on (0, eps]: eps * |f'(eps)|.
std::optional<Interval> family_tail_integral(const ExemplarFamily& fam, const Expr& abs_df, double eps)
{
    if (fam.kind == ExemplarFamily::Kind::flat_exp && !(eps <= fam.a / 2.0)) {
        return std::nullopt;
    }
    const auto at = try_eval(abs_df, Interval(eps));
    if (!at || !at->is_finite()) {
        return std::nullopt;
    }
    return Interval(0.0, (Interval(eps) * *at).hi());
}

// Enclosure of the upper integral of |f'| over [0, hi]. When interval
// evaluation cannot bound |f'| near 0, the exemplar tail bound covers [0, eps].
std::optional<Interval> upper_integral_abs(const FlatCandidate& cand, const Expr& abs_df, double hi, std::string& note)
{
    if (!(hi > 0.0)) {
        return Interval(0.0);
    }
    const ExtendedExpr integrand{abs_df, cand.f.zero_extended};
    if (auto whole = enclose_upper(integrand, Interval(0.0, hi))) {
        return whole;
    }
    const auto fam = recognize_family(cand.f.base);
    if (!fam) {
        return std::nullopt;
    }
    double eps = std::min(hi / 2.0, kStoicaFloor);
    if (fam->kind == ExemplarFamily::Kind::flat_exp) {
        eps = std::min(eps, fam->a / 2.0);
    }
    const auto tail = family_tail_integral(*fam, abs_df, eps);
    const auto body = enclose_upper(integrand, Interval(eps, hi));
    if (!tail || !body) {
        return std::nullopt;
    }
    note = "[0, " + fmt(eps) + "] bounded by eps |f'(eps)| (|f'| monotone there)";
    return *body + *tail;
}

} // namespace

ChainTrace chain_evaluate(const FlatCandidate& cand, int n)
{
    if (!(static_cast<double>(n) > cand.C)) {
        throw PreconditionViolated("chain_evaluate: requires n > C (n = " + std::to_string(n) +
                                   ", C = " + fmt(cand.C) + ")");
    }
    ChainTrace t;
    t.n = n;
    t.C = cand.C;

    const ConditionReport zero = check_zero(cand);
    const ConditionReport uno = check_uno(cand, n);
    const ConditionReport stoica = check_stoica(cand);
    t.level_set = locate_min_en(cand, n, uno);

    if (t.level_set.status == LevelSetStatus::empty) {
        t.en_empty = true;
        t.conclusion = "E_n empty: |f(x)| < x^" + std::to_string(n) + " holds on the scanned range";
        if (!t.level_set.tail_verified) {
            t.conclusion += " (tail below " + fmt(t.level_set.scan_start) + " not verified)";
        }
        if (t.level_set.tangency) {
            t.conclusion += "; |f| touches x^n from below near " + to_string(*t.level_set.tangency);
        }
        return t;
    }
    if (t.level_set.status == LevelSetStatus::inconclusive || !t.level_set.x_bar) {
        t.conclusion = "inconclusive: min E_n could not be bracketed";
        return t;
    }

    const Interval xb = *t.level_set.x_bar;
    const Expr g = abs(cand.f.base);
    const Expr dg = differentiate(g);
    const Expr df = differentiate(cand.f.base);

    const auto g_at = try_eval(g, xb);
    std::optional<Interval> g0;
    try {
        g0 = Interval(std::fabs(eval_point(cand.f, 0.0)));
    } catch (const DomainError&) {
    }
    std::optional<Interval> increment;
    if (g_at && g0) {
        increment = *g_at - *g0;
    }
    std::string tail_note;
    const auto int_abs_dg = upper_integral_abs(cand, abs(dg), xb.hi(), tail_note);
    const auto int_abs_df = upper_integral_abs(cand, abs(df), xb.hi(), tail_note);
    const Interval xn = *pow(xb, n);
    const Interval scaled = *div(Interval(cand.C), Interval(static_cast<double>(n))) * xn;
    const auto bound = derivative_bound(cand);

    {
        ChainStep s = make_step("|f(x_n)| = g(x_n) - g(0)", g_at, "=", increment);
        s.hypothesis = "f(0) = 0";
        s.status = (g_at && increment) ? combine(compare_eq(*g_at, *increment), zero) : StepStatus::unverified;
        s.note = hypothesis_note(zero);
        t.steps.push_back(s);
    }
    {
        ChainStep s = make_step("g(x_n) - g(0) <= upper integral of |g'| on [0, x_n]", increment, "<=", int_abs_dg);
        s.hypothesis = "g differentiable with bounded derivative (Volterra)";
        s.status = (increment && int_abs_dg) ? compare_le(*increment, *int_abs_dg) : StepStatus::unverified;
        s.note = bound ? "|f'| <= " + fmt(bound->hi()) + " on [2^-20, 1]" : "no finite bound on |f'| found";
        if (!tail_note.empty()) {
            s.note += "; " + tail_note;
        }
        if (!bound && s.status != StepStatus::refuted) {
            s.status = StepStatus::unverified;
        }
        t.steps.push_back(s);
    }
    {
        ChainStep s = make_step("upper integral of |g'| = upper integral of |f'|", int_abs_dg, "=", int_abs_df);
        s.hypothesis = "|g'| = |f'|, with f' = 0 where f = 0";
        s.status = (int_abs_dg && int_abs_df) ? compare_eq(*int_abs_dg, *int_abs_df) : StepStatus::unverified;
        t.steps.push_back(s);
    }
    {
        ChainStep s = make_step("upper integral of |f'| <= integral of C|f(x)|/x on [0, x_n]", int_abs_df, "<=", std::nullopt);
        s.hypothesis = "|x f'(x)| <= C|f(x)|";
        s.status = from_hypothesis(stoica);
        s.note = hypothesis_note(stoica);
        if (s.status == StepStatus::unjustified) {
            s.note += "; the C|f|/x bound uses a falsified hypothesis";
        }
        t.steps.push_back(s);
    }
    {
        ChainStep s = make_step("integral of C|f(x)|/x < C integral of x^n/x = (C/n) x_n^n", std::nullopt, "<", scaled);
        s.hypothesis = "|f(x)| < x^n on (0, x_n)";
        s.status = from_hypothesis(uno);
        s.note = hypothesis_note(uno);
        if (s.status == StepStatus::unjustified) {
            s.note += "; the strict bound |f| < x^n is false, so this step is unjustified";
        }
        t.steps.push_back(s);
    }
    {
        ChainStep s = make_step("(C/n) x_n^n < x_n^n", scaled, "<", xn);
        s.hypothesis = "n > C";
        s.status = compare_lt(scaled, xn);
        t.steps.push_back(s);
    }

    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        auto& s = t.steps[i];
        s.holds = s.status != StepStatus::unjustified && s.status != StepStatus::refuted;
        if (!s.holds && !t.first_failure) {
            t.first_failure = i;
        }
    }
    if (t.first_failure) {
        const auto& s = t.steps[*t.first_failure];
        t.conclusion = "step " + std::to_string(*t.first_failure + 1) + " (" + s.label + ") fails: " +
                       (s.status == StepStatus::unjustified ? "violated hypothesis: " + s.hypothesis
                                                            : std::string("enclosures contradict the relation"));
    } else {
        t.conclusion = "no step fails: x_n^n < x_n^n is a contradiction, so E_n cannot be non-empty under "
                       "the certified hypotheses";
    }
    return t;
}

} // namespace certint
