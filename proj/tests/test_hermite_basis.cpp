#include <gtest/gtest.h>

#include <random>

#include "hfrac/hermite_basis.hpp"
#include "oracle.hpp"

using namespace hfrac;

namespace {

double inner(const QuadratureRule& q, int a, int b) {
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += q.weights[i] * hermite_eval_1d(a, q.nodes[i]) * hermite_eval_1d(b, q.nodes[i]);
    return s;
}

}  // namespace

TEST(HermiteEval, GroundStateAtZero) {
    EXPECT_NEAR(hermite_eval_1d(0, 0.0), std::pow(std::numbers::pi, -0.25), 1e-15);
    EXPECT_NEAR(hermite_eval_1d(0, 0.0), 0.7511255, 1e-7);
}

TEST(HermiteEval, OddAtZero) { EXPECT_EQ(hermite_eval_1d(1, 0.0), 0.0); }

TEST(HermiteEval, FirstClosedForm) {
    EXPECT_NEAR(hermite_eval_1d(1, 1.0), std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25) * std::exp(-0.5), 1e-15);
    EXPECT_NEAR(hermite_eval_1d(1, 1.0), 0.6442883, 1e-7);
}

TEST(HermiteEval, MatchesPolynomialFormula) {
    for (unsigned k = 0; k <= 30; ++k)
        for (double x : {-4.0, -1.3, 0.0, 0.2, 2.5, 6.0})
            EXPECT_NEAR(hermite_eval_1d(int(k), x), oracle::hermite_fn(k, x), 1e-13) << "k=" << k << " x=" << x;
}

TEST(HermiteEval, LargeDegreeStaysBounded) {
    // |h_k| <= pi^{-1/4} for all k and x.
    for (int k : {100, 400, 1000})
        for (double x : {0.0, 3.0, 20.0, 44.0}) EXPECT_LE(std::abs(hermite_eval_1d(k, x)), 0.7512);
}

TEST(HermiteEval, NegativeDegreeRejected) { EXPECT_THROW(hermite_eval_1d(-1, 0.0), PreconditionError); }

TEST(EvalMulti, ProductOfGroundStates) {
    EXPECT_NEAR(eval_multi(MultiIndex{0, 0}, {0.0, 0.0}), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(eval_multi(MultiIndex{0, 0}, {0.0, 0.0}), 0.5641896, 1e-7);
}

TEST(EvalMulti, OddFactorVanishes) { EXPECT_EQ(eval_multi(MultiIndex{1, 0}, {0.0, 5.0}), 0.0); }

TEST(EvalMulti, DegreeTwoThree) {
    const double frozen = -0.19983304245504452;
    const double ref = oracle::hermite_fn(2, 0.3) * oracle::hermite_fn(3, -0.7);
    EXPECT_NEAR(ref, frozen, 1e-15);
    EXPECT_NEAR(eval_multi(MultiIndex{2, 3}, {0.3, -0.7}), ref, 1e-14);
}

TEST(EvalMulti, DimensionMismatch) { EXPECT_THROW(eval_multi(MultiIndex{1, 0}, {0.0}), DimensionError); }

TEST(QuadratureRule, SingleNode) {
    auto q = quadrature_rule(1);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_EQ(q.nodes[0], 0.0);
}

TEST(QuadratureRule, Orthonormality) {
    auto q = quadrature_rule(40);
    EXPECT_NEAR(inner(q, 0, 0), 1.0, 1e-12);
    EXPECT_NEAR(inner(q, 3, 5), 0.0, 1e-12);
    for (int a = 0; a < 20; ++a)
        for (int b = 0; b < 20; ++b) EXPECT_NEAR(inner(q, a, b), a == b ? 1.0 : 0.0, 1e-12);
}

TEST(QuadratureRule, NodesSymmetricAndSorted) {
    auto q = quadrature_rule(33);
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_NEAR(q.nodes[i], -q.nodes[q.size() - 1 - i], 1e-13);
        if (i) EXPECT_LT(q.nodes[i - 1], q.nodes[i]);
    }
}

TEST(QuadratureRule, CapEnforced) {
    EXPECT_THROW(quadrature_rule(0), PreconditionError);
    EXPECT_THROW(quadrature_rule(kMaxQuadratureNodes + 1), PreconditionError);
}

TEST(MultiIndexTest, EnumerationCountAndOrder) {
    auto idx = enumerate_indices(2, 4);
    EXPECT_EQ(idx.size(), 15u);
    for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_TRUE(idx[i - 1] < idx[i]);
    EXPECT_EQ(enumerate_indices(3, 2).size(), 10u);
    EXPECT_THROW(MultiIndex({1, -1}), PreconditionError);
}

TEST(Expand, HermiteFunctionIsUnitVector) {
    auto c = expand([](const Point& x) { return hermite_eval_1d(2, x[0]); }, 1, 5, quadrature_rule(40));
    for (int k = 0; k <= 5; ++k) EXPECT_NEAR(c.get(MultiIndex{k}), k == 2 ? 1.0 : 0.0, 1e-10);
}

TEST(Expand, Linearity) {
    auto c = expand([](const Point& x) { return hermite_eval_1d(0, x[0]) + 2 * hermite_eval_1d(3, x[0]); }, 1, 8,
                    quadrature_rule(40));
    for (int k = 0; k <= 8; ++k) EXPECT_NEAR(c.get(MultiIndex{k}), k == 0 ? 1.0 : (k == 3 ? 2.0 : 0.0), 1e-10);
}

TEST(Expand, GaussianAgainstAdaptiveQuadrature) {
    auto c = expand([](const Point& x) { return std::exp(-x[0] * x[0]); }, 1, 20, quadrature_rule(60));
    // Frozen values of <e^{-x^2}, h_k> from the adaptive oracle below.
    const std::pair<int, double> frozen[] = {{0, 1.0870307726111883},
                                             {2, -0.25621561022394113},
                                             {4, 0.073963075766688369},
                                             {20, 7.7273148928062804e-06}};
    for (auto [k, v] : frozen) EXPECT_NEAR(c.get(MultiIndex{k}), v, 1e-12) << k;
    for (int k = 0; k <= 20; ++k) {
        double ref = oracle::integrate([k](double x) { return std::exp(-x * x) * oracle::hermite_fn(k, x); }, -12, 12);
        EXPECT_NEAR(c.get(MultiIndex{k}), ref, 1e-12) << k;
    }
}

TEST(Expand, TwoDimensionalProduct) {
    auto c = expand([](const Point& x) { return eval_multi(MultiIndex{1, 2}, x) - 0.5 * eval_multi(MultiIndex{0, 0}, x); },
                    2, 6, quadrature_rule(30));
    for (const auto& nu : enumerate_indices(2, 6)) {
        double want = nu == MultiIndex{1, 2} ? 1.0 : (nu == MultiIndex{0, 0} ? -0.5 : 0.0);
        EXPECT_NEAR(c.get(nu), want, 1e-11) << nu.str();
    }
}

TEST(Synthesize, RoundTrip) {
    auto c = expand([](const Point& x) { return hermite_eval_1d(1, x[0]); }, 1, 6, quadrature_rule(30));
    EXPECT_NEAR(synthesize(c, {0.4}), hermite_eval_1d(1, 0.4), 1e-10);
}

TEST(Synthesize, ZeroCoefficients) {
    SpectralCoeffs c(2, 5);
    EXPECT_EQ(synthesize(c, {0.3, 0.1}), 0.0);
}

TEST(Synthesize, GaussianBumpAtRandomPoints) {
    auto f = [](const Point& x) { return std::exp(-(x[0] - 0.4) * (x[0] - 0.4) / 0.5); };
    auto c = expand(f, 1, 80, quadrature_rule(120));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 10; ++i) {
        Point x{U(rng)};
        EXPECT_NEAR(synthesize(c, x), f(x), 1e-8);
    }
}

TEST(Synthesize, GradientMatchesDerivative) {
    auto f = [](const Point& x) { return std::exp(-0.5 * (x[0] * x[0] + 2 * x[1] * x[1])) * (1 + x[0]); };
    auto c = expand(f, 2, 40, quadrature_rule(60));
    Point g;
    const Point x{0.3, -0.6};
    double v = synthesize_with_gradient(c, x, g);
    EXPECT_NEAR(v, f(x), 1e-9);
    const double h = 1e-5;
    EXPECT_NEAR(g[0], (f({x[0] + h, x[1]}) - f({x[0] - h, x[1]})) / (2 * h), 1e-8);
    EXPECT_NEAR(g[1], (f({x[0], x[1] + h}) - f({x[0], x[1] - h})) / (2 * h), 1e-8);
}

TEST(Synthesize, DimensionMismatch) {
    SpectralCoeffs c(2, 3);
    EXPECT_THROW(synthesize(c, {0.1}), DimensionError);
}
