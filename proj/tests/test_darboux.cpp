#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "certint/darboux.hpp"
#include "certint/parser.hpp"

using namespace certint;
namespace r = certint::rounding;

namespace {

ExprOracle oracle(const char* text) { return ExprOracle(parse(text)); }

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
    ~ScopedEnv() { unsetenv(name_); }

private:
    const char* name_;
};

} // namespace

TEST(Partition, Validation)
{
    EXPECT_THROW(Partition({0.0}), std::invalid_argument);
    EXPECT_THROW(Partition({0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(Partition({0.0, 2.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(Partition({0.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
    const Partition p({0.0, 0.5, 1.0});
    EXPECT_EQ(p.blocks(), 2u);
    EXPECT_EQ(p.block(1), Interval(0.5, 1.0));
}

TEST(Partition, UniformEndsExactlyAtB)
{
    const Partition p = Partition::uniform(0.1, 0.7, 3);
    EXPECT_EQ(p.size(), 4u);
    EXPECT_EQ(p.a(), 0.1);
    EXPECT_EQ(p.b(), 0.7);
}

TEST(Partition, Refines)
{
    const Partition coarse({0.0, 0.5, 1.0});
    EXPECT_TRUE(Partition({0.0, 0.25, 0.5, 1.0}).refines(coarse));
    EXPECT_FALSE(Partition({0.0, 0.25, 1.0}).refines(coarse));
}

TEST(Sums, IdentityOnUniformFour)
{
    const auto f = oracle("x");
    const Partition p = Partition::uniform(0.0, 1.0, 4);
    EXPECT_EQ(lower_sum(f, p), 0.375);
    EXPECT_EQ(upper_sum(f, p), 0.625);
}

TEST(Sums, Constant)
{
    const auto f = oracle("3");
    const Partition p({-1.0, 0.25, 2.0});
    EXPECT_EQ(lower_sum(f, p), 9.0);
    EXPECT_EQ(upper_sum(f, p), 9.0);
}

TEST(Sums, Dirichlet)
{
    const auto d = ConstantBoundsOracle::dirichlet();
    const Partition p = Partition::uniform(0.0, 1.0, 10);
    EXPECT_EQ(lower_sum(d, p), 0.0);
    EXPECT_EQ(upper_sum(d, p), 1.0);
}

TEST(Sums, OrderAndRefinementMonotonicity)
{
    std::mt19937_64 rng(3);
    const std::vector<ExprOracle> fs = {oracle("sin(5*x)"), oracle("x^3 - x"), oracle("exp(-x^2)"),
                                        oracle("abs(x - 0.3)")};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> pts{-1.0, 1.0};
        for (int i = 0; i < 8; ++i) {
            pts.push_back(u(rng));
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const Partition coarse(pts);
        for (int i = 0; i < 8; ++i) {
            pts.push_back(u(rng));
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const Partition fine(pts);
        ASSERT_TRUE(fine.refines(coarse));
        for (const auto& f : fs) {
            EXPECT_LE(lower_sum(f, coarse), upper_sum(f, coarse));
            EXPECT_LE(r::widen_down(lower_sum(f, coarse), 4), r::widen_up(lower_sum(f, fine), 4));
            EXPECT_LE(r::widen_down(upper_sum(f, fine), 4), r::widen_up(upper_sum(f, coarse), 4));
        }
    }
}

TEST(RefineOnce, LeftmostOnTies)
{
    const auto f = oracle("x");
    EXPECT_EQ(refine_once(f, Partition::uniform(0.0, 1.0, 2)).partition, Partition({0.0, 0.25, 0.5, 1.0}));
    EXPECT_EQ(refine_once(oracle("2"), Partition({0.0, 0.5, 1.0})).partition, Partition({0.0, 0.25, 0.5, 1.0}));
    EXPECT_EQ(refine_once(f, Partition({0.0, 1.0})).partition, Partition({0.0, 0.5, 1.0}));
}

TEST(RefineOnce, PicksLargestWeightedOscillation)
{
    const auto f = oracle("x^2");
    const RefineResult res = refine_once(f, Partition({0.0, 0.5, 1.0}));
    EXPECT_EQ(res.partition, Partition({0.0, 0.5, 0.75, 1.0}));
    EXPECT_TRUE(res.partition.refines(Partition({0.0, 0.5, 1.0})));
    EXPECT_FALSE(res.at_min_width);
}

TEST(RefineOnce, MinimumWidthIsNoOp)
{
    const double w = min_block_width(0.0, 1.0);
    const Partition p({0.0, w / 2, 1.0});
    const StepOracle f({0.0, w / 4, 1.0}, {0.0, 1.0});
    const RefineResult res = refine_once(f, p);
    EXPECT_TRUE(res.at_min_width);
    EXPECT_EQ(res.partition, p);
}

TEST(Enclose, SquareContainsOneThird)
{
    const DarbouxEnclosure e = enclose(oracle("x^2"), Interval(0.0, 1.0), 1e-3);
    EXPECT_TRUE(e.converged());
    EXPECT_LE(e.gap(), 1e-3);
    const Interval third = *div(Interval(1.0), Interval(3.0));
    EXPECT_TRUE(e.lower_integral.contains(third));
    EXPECT_TRUE(e.upper_integral.contains(third));
    EXPECT_LE(e.lower_integral.lo(), e.upper_integral.hi());
}

TEST(Enclose, ConstantConvergesImmediately)
{
    const DarbouxEnclosure e = enclose(oracle("2.5"), Interval(1.0, 3.0), 1e-9);
    EXPECT_TRUE(e.converged());
    EXPECT_EQ(e.refinement_steps, 0u);
    EXPECT_EQ(e.lower_integral, Interval(5.0));
    EXPECT_EQ(e.history.size(), 1u);
}

TEST(Enclose, DirichletGapPersists)
{
    const DarbouxEnclosure e = enclose(ConstantBoundsOracle::dirichlet(), Interval(0.0, 1.0), 1e-3, 2000);
    EXPECT_EQ(e.status, EnclosureStatus::not_converged);
    EXPECT_EQ(e.lower_integral.lo(), 0.0);
    EXPECT_EQ(e.upper_integral.hi(), 1.0);
    EXPECT_EQ(e.refinement_steps, 2000u);
    EXPECT_EQ(e.partition_size, 2001u);
}

TEST(Enclose, ThomaeGapCloses)
{
    const DarbouxEnclosure e = enclose(ThomaeOracle(), Interval(0.0, 1.0), 1e-2, 200000);
    EXPECT_TRUE(e.converged());
    EXPECT_EQ(e.lower_integral.lo(), 0.0);
    EXPECT_LE(e.upper_integral.hi(), 1e-2);
}

TEST(Enclose, HistoryIsMonotone)
{
    const DarbouxEnclosure e = enclose(oracle("sin(7*x) + x"), Interval(-1.0, 2.0), 1e-4);
    ASSERT_GE(e.history.size(), 2u);
    for (std::size_t i = 1; i < e.history.size(); ++i) {
        EXPECT_GE(e.history[i].lower_sum, e.history[i - 1].lower_sum);
        EXPECT_LE(e.history[i].upper_sum, e.history[i - 1].upper_sum);
    }
    EXPECT_EQ(e.history.back().lower_sum, e.lower_integral.lo());
    EXPECT_EQ(e.history.back().upper_sum, e.upper_integral.hi());
}

TEST(Enclose, IndeterminateBelowMinimumWidthIsInconclusive)
{
    const DarbouxEnclosure e = enclose(oracle("1/x"), Interval(-1.0, 1.0), 1e-3);
    EXPECT_EQ(e.status, EnclosureStatus::inconclusive);
    EXPECT_EQ(e.lower_integral.lo(), -std::numeric_limits<double>::infinity());
}

TEST(Enclose, Preconditions)
{
    const auto f = oracle("x");
    EXPECT_THROW(enclose(f, Interval(0.0, 1.0), 0.0), std::invalid_argument);
    EXPECT_THROW(enclose(f, Interval(0.0, 1.0), 1e-3, 0), std::invalid_argument);
    EXPECT_THROW(enclose(f, Interval(1.0), 1e-3), std::invalid_argument);
    EXPECT_THROW(enclose(f, Interval::entire(), 1e-3), std::invalid_argument);
}

// Step functions with dyadic breaks and values have exactly representable
// integrals, so a brute-force piecewise sum is an exact oracle.
TEST(Enclose, StepFunctionsMatchBruteForce)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> cell(1, 63);
    std::uniform_int_distribution<int> val(-16, 16);
    std::uniform_int_distribution<int> pieces(1, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = pieces(rng);
        std::vector<double> breaks{0.0, 1.0};
        while (static_cast<int>(breaks.size()) < k + 1) {
            breaks.push_back(cell(rng) / 64.0);
            std::sort(breaks.begin(), breaks.end());
            breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        }
        std::vector<double> values;
        double exact = 0.0;
        for (int i = 0; i < k; ++i) {
            values.push_back(val(rng) / 8.0);
            exact += values.back() * (breaks[i + 1] - breaks[i]);
        }
        const StepOracle f(breaks, values);
        const DarbouxEnclosure e = enclose(f, Interval(0.0, 1.0), 1e-6);
        EXPECT_TRUE(e.converged());
        EXPECT_LE(e.lower_integral.lo(), exact);
        EXPECT_GE(e.upper_integral.hi(), exact);
    }
}

TEST(StepOracle, BreakpointsTakeBothSides)
{
    const StepOracle f({0.0, 0.5, 1.0}, {1.0, 3.0});
    const auto b = f.bounds(Interval(0.25, 0.5));
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->lower, 1.0);
    EXPECT_EQ(b->upper, 3.0);
    EXPECT_THROW(static_cast<void>(f.bounds(Interval(0.5, 1.5))), DomainError);
}

TEST(ThomaeOracle, SmallestDenominator)
{
    const ThomaeOracle f;
    const double third = f.bounds(Interval(0.3, 0.4))->upper;
    EXPECT_GE(third, 1.0 / 3.0);
    EXPECT_LE(third, std::nextafter(1.0 / 3.0, 1.0));
    EXPECT_EQ(f.bounds(Interval(0.45, 0.55))->upper, 0.5);
    EXPECT_EQ(f.bounds(Interval(0.0, 0.1))->upper, 1.0);
    EXPECT_EQ(f.bounds(Interval(0.3, 0.4))->lower, 0.0);
}

TEST(History, CsvExport)
{
    const DarbouxEnclosure e = enclose(oracle("x"), Interval(0.0, 1.0), 0.1);
    std::ostringstream os;
    write_history_csv(os, e);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "step,lower_sum,upper_sum");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, e.history.size());
}

TEST(Budget, EnvironmentOverride)
{
    {
        ScopedEnv env("DARBOUX_MAX_STEPS", "123");
        EXPECT_EQ(default_max_steps(), 123u);
    }
    {
        ScopedEnv env("DARBOUX_MAX_STEPS", "nonsense");
        EXPECT_EQ(default_max_steps(), kDefaultMaxSteps);
    }
    EXPECT_EQ(default_max_steps(), kDefaultMaxSteps);
}
