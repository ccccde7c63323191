#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "certint/parser.hpp"
#include "certint/volterra.hpp"
#include "support/random_expr.hpp"

using namespace certint;

namespace {

ExtendedExpr H(const char* text, bool zero_extend = false) { return ExtendedExpr{parse(text), zero_extend}; }

Interval third() { return *div(Interval(1.0), Interval(3.0)); }

Partition random_partition(gen::Rng& rng, double a, double b, int points)
{
    std::vector<double> pts{a, b};
    while (static_cast<int>(pts.size()) < points) {
        pts.push_back(gen::uniform(rng, a, b));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
    return Partition(std::move(pts));
}

} // namespace

TEST(Sandwich, HalfSquareUniformFour)
{
    const SandwichVerdict v = sandwich_check(H("x^2/2"), Interval(0.0, 1.0), Partition::uniform(0.0, 1.0, 4));
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.outcome, SandwichOutcome::pass);
    EXPECT_EQ(v.lower_sum, 0.375);
    EXPECT_EQ(v.increment, 0.5);
    EXPECT_EQ(v.upper_sum, 0.625);
    EXPECT_EQ(v.partition_size, 4u);
}

TEST(Sandwich, ConstantHasZeroIncrement)
{
    const SandwichVerdict v = sandwich_check(H("7"), Interval(-2.0, 3.0), Partition({-2.0, 0.1, 3.0}));
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.lower_sum, 0.0);
    EXPECT_EQ(v.increment, 0.0);
    EXPECT_EQ(v.upper_sum, 0.0);
}

TEST(Sandwich, CubeOnRandomSeventeenPoints)
{
    gen::Rng rng(11);
    const Partition p = random_partition(rng, 0.0, 1.0, 17);
    ASSERT_EQ(p.size(), 17u);
    const SandwichVerdict v = sandwich_check(H("x^3/3"), Interval(0.0, 1.0), p);
    EXPECT_TRUE(v.pass);
    EXPECT_TRUE(v.increment_enclosure.contains(third()) || third().contains(v.increment_enclosure));
    EXPECT_LE(v.lower_sum, 1.0 / 3.0);
    EXPECT_GE(v.upper_sum, 1.0 / 3.0);
}

TEST(Sandwich, UnboundedDerivativeIsUnverified)
{
    const SandwichVerdict v =
        sandwich_check(H("x^2*sin(1/x^2)", true), Interval(0.0, 1.0), Partition::uniform(0.0, 1.0, 8));
    EXPECT_EQ(v.outcome, SandwichOutcome::unverified_hypothesis);
    EXPECT_FALSE(v.pass);
    EXPECT_EQ(to_string(v.outcome), "unverified-hypothesis");
}

TEST(Sandwich, PartitionMustSpanDomain)
{
    EXPECT_THROW(sandwich_check(H("x"), Interval(0.0, 1.0), Partition::uniform(0.0, 2.0, 4)), std::invalid_argument);
}

TEST(Sandwich, EndpointDomainError)
{
    EXPECT_THROW(sandwich_check(H("log(x)"), Interval(0.0, 1.0), Partition::uniform(0.0, 1.0, 4)), DomainError);
}

TEST(Boundedness, CertifiesSmoothAndRejectsBlowUp)
{
    const BoundednessCheck ok = certify_bounded(H("cos(x)"), Interval(0.0, 1.0));
    EXPECT_TRUE(ok.certified);
    EXPECT_TRUE(ok.bound.contains(Interval(std::cos(1.0), 1.0)));
    EXPECT_FALSE(certify_bounded(H("1/x"), Interval(-1.0, 1.0)).certified);
}

TEST(Sandwich, RandomisedPropertySuite)
{
    gen::Rng rng(1000);
    const std::vector<const char*> exemplars = {"x^2/2", "sin(3*x) + x", "exp(x/2) - x^2", "cos(x)*sin(x)"};
    int passed = 0;
    for (int i = 0; i < 300; ++i) {
        const ExtendedExpr h = i % 4 == 0 ? H(exemplars[static_cast<std::size_t>(i / 4) % exemplars.size()])
                                          : ExtendedExpr{gen::random_polynomial(rng, 6), false};
        const double a = gen::uniform(rng, -2.0, 1.5);
        const double b = gen::uniform(rng, a + 0.01, 2.0);
        const Partition p = random_partition(rng, a, b, gen::uniform_int(rng, 2, 64));
        const SandwichVerdict v = sandwich_check(h, Interval(a, b), p);
        EXPECT_TRUE(v.pass) << to_string(h) << " on [" << a << ", " << b << "]";
        passed += v.pass ? 1 : 0;
    }
    EXPECT_EQ(passed, 300);
}

TEST(Ftc, CubeWithinTolerance)
{
    const Interval bracket = ftc_reconstruct(H("x^3/3"), Interval(0.0, 1.0), 1e-4);
    EXPECT_LE(bracket.width(), 1e-4);
    EXPECT_TRUE(bracket.contains(third()));
}

TEST(Ftc, LinearIsExact)
{
    const Interval bracket = ftc_reconstruct(H("2.5*x"), Interval(-1.0, 3.0), 1e-9);
    EXPECT_TRUE(bracket.contains(10.0));
    EXPECT_LE(bracket.width(), 1e-9);
}

TEST(Ftc, DirichletDoesNotConverge)
{
    try {
        integral_bracket(ConstantBoundsOracle::dirichlet(), Interval(0.0, 1.0), 1e-3, 500);
        FAIL() << "expected NotConverged";
    } catch (const NotConverged& e) {
        EXPECT_EQ(e.enclosure().lower_integral.lo(), 0.0);
        EXPECT_EQ(e.enclosure().upper_integral.hi(), 1.0);
    }
}

TEST(Ftc, ConsistentWithPointIncrement)
{
    gen::Rng rng(77);
    for (int i = 0; i < 60; ++i) {
        const ExtendedExpr h{gen::random_polynomial(rng, 5), false};
        const double a = gen::uniform(rng, -2.0, 1.0);
        const double b = gen::uniform(rng, a + 0.1, 2.0);
        const double tol = 1e-3;
        const Interval bracket = ftc_reconstruct(h, Interval(a, b), tol);
        const double ha = eval_point(h, a);
        const double hb = eval_point(h, b);
        // The point difference cancels, so its error scales with the endpoint values.
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(ha), std::fabs(hb));
        EXPECT_LE(bracket.width(), tol);
        EXPECT_LE(bracket.lo(), hb - ha + slack) << to_string(h);
        EXPECT_GE(bracket.hi(), hb - ha - slack) << to_string(h);
        EXPECT_TRUE(bracket.overlaps(increment_enclosure(h, Interval(a, b))));
    }
}
