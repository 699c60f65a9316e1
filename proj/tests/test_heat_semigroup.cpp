#include <gtest/gtest.h>

#include "hfrac/heat_semigroup.hpp"
#include "oracle.hpp"

using namespace hfrac;

TEST(Meda, TofS) {
    EXPECT_NEAR(meda_s_of_t(1.0), 0.7615942, 1e-7);
    EXPECT_NEAR(meda_t_of_s(0.5), 0.5 * std::log(3.0), 1e-15);
    EXPECT_NEAR(meda_t_of_s(0.5), 0.5493061, 1e-7);
    EXPECT_NEAR(meda_s_of_t(meda_t_of_s(0.999)), 0.999, 1e-14);
}

TEST(Meda, DomainErrors) {
    EXPECT_THROW(meda_t_of_s(0.0), DomainError);
    EXPECT_THROW(meda_t_of_s(1.0), DomainError);
    EXPECT_THROW(meda_t_of_s(-0.2), DomainError);
    EXPECT_THROW(meda_s_of_t(0.0), DomainError);
    EXPECT_THROW(meda_s_of_t(-1.0), DomainError);
    EXPECT_THROW(meda_s_of_t(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(MuDensity, AtTanhOne) {
    for (double rho : {-0.5, 0.0, 0.3, 0.9}) EXPECT_NEAR(mu_density(std::tanh(1.0), rho), std::pow(std::cosh(1.0), 2), 1e-12);
    EXPECT_NEAR(mu_density(std::tanh(1.0), 0.4), 2.3810978, 1e-7);
}

TEST(MuDensity, SmallS) { EXPECT_NEAR(mu_density(1e-6, 0.5) * std::pow(1e-6, 1.5), 1.0, 1e-3); }

TEST(MuDensity, DomainErrors) {
    EXPECT_THROW(mu_density(0.0, 0.5), DomainError);
    EXPECT_THROW(mu_density(1.0, 0.5), DomainError);
}

TEST(MuDensity, ChangeOfVariables) {
    // int_0^inf e^{-t} t^{-1/2} dt = Gamma(1/2), once in t and once against d mu_{-1/2}(s).
    const double t_side = oracle::integrate_half_line([](double t) { return std::exp(-t) / std::sqrt(t); });
    EXPECT_NEAR(t_side, std::sqrt(std::numbers::pi), 1e-12);
    SMeasureRule rule(-0.5, QuadratureSpec{});
    const double s_side = rule.integrate([](const SNode& nd) { return std::exp(-nd.t); }, 0.5);
    EXPECT_NEAR(s_side, 1.7724539, 1e-7);
    EXPECT_NEAR(s_side, t_side, 1e-9);
}

TEST(HeatKernel, OriginValueAndSeries) {
    const double closed = 1.0 / std::sqrt(2 * std::numbers::pi * std::sinh(1.0));
    double series = 0;
    for (unsigned j = 0; j <= 80; ++j) series += std::exp(-0.5 * (2 * j + 1)) * std::pow(oracle::hermite_fn(j, 0), 2);
    const double frozen = 0.36800519870756088;
    EXPECT_NEAR(series, frozen, 1e-15);
    EXPECT_NEAR(heat_kernel(0.5, {0.0}, {0.0}), closed, 1e-15);
    EXPECT_NEAR(heat_kernel(0.5, {0.0}, {0.0}), series, 1e-8);
    EXPECT_NEAR(heat_kernel(0.5, {0.0}, {0.0}), 0.3680, 1e-4);
}

TEST(HeatKernel, Symmetry) {
    for (double t : {0.01, 0.3, 2.0})
        EXPECT_EQ(heat_kernel(t, {0.3, -1.2}, {0.8, 0.4}), heat_kernel(t, {0.8, 0.4}, {0.3, -1.2}));
}

TEST(HeatKernel, MatchesDirectFormula) {
    for (double t : {0.05, 0.5, 3.0})
        for (double x : {-1.0, 0.2})
            for (double z : {-0.4, 2.0}) EXPECT_NEAR(heat_kernel(t, {x}, {z}), oracle::heat1(t, x, z), 1e-14);
}

TEST(HeatKernel, EigenRelation) {
    for (unsigned k : {0u, 1u, 3u, 6u})
        for (double x : {-1.1, 0.0, 0.7}) {
            const double t = 0.4;
            double v = oracle::integrate([&](double z) { return heat_kernel(t, {x}, {z}) * oracle::hermite_fn(k, z); }, -20, 20);
            EXPECT_NEAR(v, std::exp(-t * (2.0 * k + 1)) * hermite_eval_1d(int(k), x), 1e-8);
        }
}

TEST(HeatKernel, DomainError) { EXPECT_THROW(heat_kernel(0.0, {0.0}, {0.0}), DomainError); }

TEST(HeatKernelS, SameAsTParametrization) {
    EXPECT_NEAR(heat_kernel_s(std::tanh(1.0), {0.3}, {-0.2}), heat_kernel(1.0, {0.3}, {-0.2}), 1e-12);
    for (double t : {0.01, 0.2, 1.5, 6.0})
        EXPECT_NEAR(heat_kernel_s(std::tanh(t), {0.3, 1.0}, {-0.2, 0.1}), heat_kernel(t, {0.3, 1.0}, {-0.2, 0.1}),
                    1e-12 * (1 + heat_kernel(t, {0.3, 1.0}, {-0.2, 0.1})));
}

TEST(HeatKernelS, VanishesAsSToOne) {
    EXPECT_LT(heat_kernel_s(1 - 1e-12, {0.0}, {0.0}), 1e-5);
    EXPECT_LT(heat_kernel_s(1 - 1e-12, {0.0}, {0.0}), heat_kernel_s(1 - 1e-6, {0.0}, {0.0}));
}

TEST(HeatKernelS, TwoDimensionsFactorize) {
    for (double s : {0.1, 0.6, 0.95}) {
        const double t = std::atanh(s);
        EXPECT_NEAR(heat_kernel_s(s, {0.3, -0.5}, {1.1, 0.2}), oracle::heat1(t, 0.3, 1.1) * oracle::heat1(t, -0.5, 0.2),
                    1e-13);
    }
}

TEST(HeatKernelS, DomainErrors) {
    EXPECT_THROW(heat_kernel_s(0.0, {0.0}, {0.0}), DomainError);
    EXPECT_THROW(heat_kernel_s(1.0, {0.0}, {0.0}), DomainError);
}

TEST(Mehler, SmallRLimit) {
    const Point x{0.4, -0.3}, z{1.0, 0.2};
    const double want = std::pow(std::numbers::pi, -1.0) * std::exp(-0.5 * (0.25 + 1.04));
    EXPECT_NEAR(mehler(1e-8, x, z), want, 1e-6);
}

TEST(Mehler, AgainstSeries) {
    // r^80 < 1e-24, so 80 terms reach double precision.
    double series = 0;
    for (unsigned j = 0; j <= 80; ++j) series += std::pow(0.5, j) * oracle::hermite_fn(j, 0.7) * oracle::hermite_fn(j, -0.1);
    const double frozen = 0.39120486425902784;
    EXPECT_NEAR(series, frozen, 1e-15);
    EXPECT_NEAR(mehler(0.5, {0.7}, {-0.1}), series, 1e-10);
}

TEST(Mehler, PartialVanishesBelowHalf) {
    EXPECT_EQ(mehler_partial(0.4, {0.3}, {0.1}, 2), 0.0);
    EXPECT_GT(mehler_partial(0.8, {0.3}, {0.1}, 2), 0.0);
}

TEST(Mehler, PartialEqualsLeadingShells) {
    const double s = 0.7, r = (1 - s) / (1 + s);
    const double want = std::sqrt(r) * (oracle::hermite_fn(0, 0.3) * oracle::hermite_fn(0, 0.1) +
                                        r * oracle::hermite_fn(1, 0.3) * oracle::hermite_fn(1, 0.1));
    EXPECT_NEAR(mehler_partial(s, {0.3}, {0.1}, 2), want, 1e-14);
}

TEST(Mehler, DomainErrors) {
    EXPECT_THROW(mehler(0.0, {0.0}, {0.0}), DomainError);
    EXPECT_THROW(mehler(1.0, {0.0}, {0.0}), DomainError);
    EXPECT_THROW(mehler_partial(1.0, {0.0}, {0.0}, 1), DomainError);
    EXPECT_THROW(mehler_partial(0.0, {0.0}, {0.0}, 1), DomainError);
}

TEST(HeatOfOne, SmallTime) { EXPECT_NEAR(heat_of_one(1e-6, {1.3}), 1.0, 1e-4); }

TEST(HeatOfOne, AgainstQuadrature) {
    const double q = oracle::integrate([](double z) { return oracle::heat1(0.5, 0.0, z); }, -30, 30);
    EXPECT_NEAR(q, 0.80501818219459209, 1e-14);
    EXPECT_NEAR(heat_of_one(0.5, {0.0}), q, 1e-8);
    EXPECT_NEAR(heat_of_one(0.5, {0.0}), 1 / std::sqrt(std::cosh(1.0)), 1e-15);
    EXPECT_NEAR(heat_of_one(0.5, {0.0}), 0.8050, 1e-4);
}

TEST(HeatOfOne, MonotoneDecay) {
    double prev = heat_of_one(0.7, {0.0, 0.0});
    for (double r = 0.25; r < 6; r += 0.25) {
        double v = heat_of_one(0.7, {r, 0.0});
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(HeatOfOne, SParametrization) {
    for (double t : {0.1, 0.9, 3.0}) EXPECT_NEAR(heat_of_one_s(std::tanh(t), {0.5, -1.0}), heat_of_one(t, {0.5, -1.0}), 1e-13);
}

TEST(HeatOfOne, DomainError) {
    EXPECT_THROW(heat_of_one(0.0, {0.0}), DomainError);
    EXPECT_THROW(heat_of_one_s(1.0, {0.0}), DomainError);
}

TEST(HeatApply, EigenfunctionSpectral) {
    SpectralCoeffs c(1, 5);
    c.set(MultiIndex{3}, 1.0);
    auto r = heat_apply(0.2, c);
    EXPECT_NEAR(r.get(MultiIndex{3}), std::exp(-1.4), 1e-15);
    EXPECT_EQ(r.entries().size(), 1u);
}

TEST(HeatApply, SemigroupLaw) {
    SpectralCoeffs c(2, 6);
    for (const auto& nu : enumerate_indices(2, 6)) c.set(nu, 1.0 / (1 + nu.order() + nu[0]));
    auto a = heat_apply(0.3, heat_apply(0.45, c));
    auto b = heat_apply(0.75, c);
    EXPECT_LT(a.max_abs_diff(b), 1e-8);
}

TEST(HeatApply, GridAgreesWithSpectral) {
    auto f = [](const Point& x) { return std::exp(-x[0] * x[0]); };
    auto g = heat_apply(0.3, GridFunction::sample(1, 10.0, 0.05, f));
    auto c = heat_apply(0.3, expand(f, 1, 60, quadrature_rule(90)));
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Point x = g.point(i);
        if (std::abs(x[0]) <= 3) worst = std::max(worst, std::abs(g[i] - synthesize(c, x)));
    }
    EXPECT_LE(worst, 1e-7);
}

TEST(HeatApply, GridEigenRelation2D) {
    auto f = [](const Point& x) { return eval_multi(MultiIndex{1, 2}, x); };
    auto g = heat_apply(0.25, GridFunction::sample(2, 9.0, 0.1, f));
    for (std::size_t i = 0; i < g.size(); i += 97) {
        Point x = g.point(i);
        if (std::abs(x[0]) <= 3 && std::abs(x[1]) <= 3) EXPECT_NEAR(g[i], std::exp(-0.25 * 8) * f(x), 1e-8);
    }
}

TEST(HeatApply, DomainError) {
    SpectralCoeffs c(1, 2);
    EXPECT_THROW(heat_apply(0.0, c), DomainError);
    EXPECT_THROW(heat_apply(-1.0, GridFunction(1, 2.0, 0.5)), DomainError);
}
