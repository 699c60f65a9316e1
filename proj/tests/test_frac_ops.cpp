#include <gtest/gtest.h>

#include <random>

#include "hfrac/frac_ops.hpp"
#include "hfrac/pointwise.hpp"
#include "oracle.hpp"

using namespace hfrac;

namespace {

KernelSpec spec(KernelKind kind, double sigma, std::size_t n, int k = 0) {
    KernelSpec ks;
    ks.kind = kind;
    ks.sigma = sigma;
    ks.k = k;
    ks.dim = n;
    return ks;
}

// t-domain kernels in one dimension, by adaptive quadrature.
double frac_power_t(double sigma, double x, double z, int k = 0) {
    return oracle::integrate_half_line([&](double t) {
               return oracle::heat1(t, x, z) * std::exp(-2.0 * k * t) * std::pow(t, -1 - sigma);
           }) /
           (-std::tgamma(-sigma));
}

double frac_int_t(double sigma, double x, double z) {
    return oracle::integrate_half_line([&](double t) { return oracle::heat1(t, x, z) * std::pow(t, sigma - 1); }) /
           std::tgamma(sigma);
}

SpectralCoeffs sample_coeffs(std::size_t n, int N) {
    SpectralCoeffs c(n, N);
    for (const auto& nu : enumerate_indices(n, N)) c.set(nu, std::cos(1.0 + nu.order() + 0.3 * nu[0]));
    return c;
}

}  // namespace

TEST(Multiplier, SquareRootAtDegreeFour) {
    SpectralCoeffs c(1, 6);
    c.set(MultiIndex{4}, 1.5);
    EXPECT_NEAR(multiplier_apply({0.5, 0}, c).get(MultiIndex{4}), 4.5, 1e-15);
}

TEST(Multiplier, ZeroIsIdentity) {
    auto c = sample_coeffs(2, 7);
    EXPECT_EQ(multiplier_apply({0.0, 0}, c).max_abs_diff(c), 0.0);
    EXPECT_EQ(multiplier_apply({0.0, -4}, project_Sk(c, 2)).max_abs_diff(project_Sk(c, 2)), 0.0);
}

TEST(Multiplier, InverseLaw) {
    auto c = sample_coeffs(2, 10);
    for (double s : {0.1, 0.5, 0.9, 1.0}) {
        EXPECT_LT(multiplier_apply({-s, 0}, multiplier_apply({s, 0}, c)).max_abs_diff(c), 1e-12);
        EXPECT_LT(multiplier_apply({-s, 2}, multiplier_apply({s, 2}, c)).max_abs_diff(c), 1e-12);
    }
}

TEST(Multiplier, ShiftedEigenvalues) {
    SpectralCoeffs c(1, 6);
    c.set(MultiIndex{3}, 1.0);
    EXPECT_NEAR(multiplier_apply({0.5, 2}, c).get(MultiIndex{3}), 3.0, 1e-15);
    EXPECT_NEAR(multiplier_apply({0.5, -2}, c).get(MultiIndex{3}), std::sqrt(5.0), 1e-15);
}

TEST(Multiplier, SkViolationNamesIndex) {
    SpectralCoeffs c(1, 4);
    c.set(MultiIndex{0}, 1.0);
    c.set(MultiIndex{3}, 1.0);
    try {
        multiplier_apply({0.5, -2}, c);
        FAIL() << "expected a precondition error";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("nu=(0)"), std::string::npos) << e.what();
    }
}

TEST(ProjectSk, Basics) {
    SpectralCoeffs c(1, 5);
    c.set(MultiIndex{0}, 1.0);
    c.set(MultiIndex{3}, 2.0);
    EXPECT_EQ(project_Sk(c, 0).max_abs_diff(c), 0.0);
    auto p = project_Sk(c, 1);
    EXPECT_EQ(p.get(MultiIndex{0}), 0.0);
    EXPECT_EQ(p.get(MultiIndex{3}), 2.0);
}

TEST(ProjectSk, Idempotent) {
    auto c = sample_coeffs(3, 6);
    for (int k : {0, 1, 3, 7}) EXPECT_EQ(project_Sk(project_Sk(c, k), k).max_abs_diff(project_Sk(c, k)), 0.0);
}

TEST(Kernel, Symmetry) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2, 2);
    for (auto kind : {KernelKind::FracPower, KernelKind::FracIntegral})
        for (std::size_t n : {1u, 2u}) {
            KernelEvaluator K(spec(kind, 0.4, n));
            for (int i = 0; i < 20; ++i) {
                Point x(n), z(n);
                for (auto& v : x) v = U(rng);
                for (auto& v : z) v = U(rng);
                double a = K.value(x, z), b = K.value(z, x);
                EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
            }
        }
}

TEST(Kernel, ShiftedBelowUnshifted) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    for (std::size_t n : {1u, 2u}) {
        KernelEvaluator F(spec(KernelKind::FracPower, 0.6, n)), F2(spec(KernelKind::ShiftPlus, 0.6, n, 1)),
            F4(spec(KernelKind::ShiftPlus, 0.6, n, 2));
        for (int i = 0; i < 100; ++i) {
            Point x(n), z(n);
            for (auto& v : x) v = U(rng);
            for (auto& v : z) v = U(rng);
            double f = F.value(x, z), f2 = F2.value(x, z), f4 = F4.value(x, z);
            EXPECT_GE(f4, 0.0);
            EXPECT_LE(f4, f2);
            EXPECT_LE(f2, f);
        }
    }
}

TEST(Kernel, FracPowerAgainstTDomain) {
    const double frozen = 0.16288293176768023;
    const double ref = frac_power_t(0.3, 0.5, -0.5);
    EXPECT_NEAR(ref, frozen, 1e-14);
    EXPECT_NEAR(kernel_eval(spec(KernelKind::FracPower, 0.3, 1), {0.5}, {-0.5}), ref, 1e-7 * ref);
}

TEST(Kernel, OtherKindsAgainstTDomain) {
    for (auto [x, z] : {std::pair{0.1, 0.6}, std::pair{-1.5, 2.0}, std::pair{3.0, 2.9}}) {
        double a = kernel_eval(spec(KernelKind::FracPower, 0.75, 1), {x}, {z});
        EXPECT_NEAR(a, frac_power_t(0.75, x, z), 1e-7 * a);
        double b = kernel_eval(spec(KernelKind::ShiftPlus, 0.4, 1, 1), {x}, {z});
        EXPECT_NEAR(b, frac_power_t(0.4, x, z, 1), 1e-7 * b);
        double c = kernel_eval(spec(KernelKind::FracIntegral, 0.35, 1), {x}, {z});
        EXPECT_NEAR(c, frac_int_t(0.35, x, z), 1e-7 * c);
    }
}

TEST(Kernel, DiagonalIsDomainErrorForSingularKinds) {
    EXPECT_THROW(kernel_eval(spec(KernelKind::FracPower, 0.5, 1), {0.3}, {0.3}), DomainError);
    EXPECT_THROW(kernel_eval(spec(KernelKind::FracIntegral, 0.5, 2), {0.3, 0.1}, {0.3, 0.1}), DomainError);
    // n < 2 sigma: F_{-sigma} is finite on the diagonal.
    EXPECT_TRUE(std::isfinite(kernel_eval(spec(KernelKind::FracIntegral, 0.8, 1), {0.3}, {0.3})));
}

TEST(Kernel, InvalidSpecs) {
    EXPECT_THROW(KernelEvaluator(spec(KernelKind::FracPower, 1.0, 1)), PreconditionError);
    EXPECT_THROW(KernelEvaluator(spec(KernelKind::ShiftPlus, 0.5, 1, 0)), PreconditionError);
    EXPECT_THROW(KernelEvaluator(spec(KernelKind::FracPower, 0.5, 4)), PreconditionError);
}

TEST(Kernel, GradientMatchesDifferences) {
    KernelEvaluator K(spec(KernelKind::FracPower, 0.4, 2));
    const Point x{0.4, -0.2}, z{1.0, 0.5};
    const double h = 1e-5;
    for (std::size_t i = 0; i < 2; ++i) {
        Point xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd = (K.value(xp, z) - K.value(xm, z)) / (2 * h);
        EXPECT_NEAR(K.dx(i, x, z), fd, 1e-7 * (1 + std::abs(fd)));
    }
}

TEST(Boundary, FracIntegralOfOneAtOrigin) {
    // sigma = 1, n = 1: H^{-1}1(0) = int_0^inf (cosh 2t)^{-1/2} dt.
    const double ref = oracle::integrate_half_line([](double t) { return 1 / std::sqrt(std::cosh(2 * t)); });
    EXPECT_NEAR(ref, 1.31102877714606, 1e-13);
    const QuadratureSpec q{};
    EXPECT_NEAR(boundary_term_eval(BoundaryKind::IntegralOfOne, BoundaryParams{1.0, 0, 1, q}, {0.0}), ref, 1e-8);
    // Second route: integrate the kernel F_{-1}(0, .) itself.
    KernelEvaluator K(spec(KernelKind::FracIntegral, 1.0, 1));
    auto f = [&](double z) { return K.value({0.0}, {z}); };
    double kq = 2 * (oracle::integrate(f, 0.0, 1.0) + oracle::integrate(f, 1.0, 4.0) + oracle::integrate(f, 4.0, 20.0));
    EXPECT_NEAR(kq, ref, 1e-8);
}

TEST(Boundary, GrowthOfBSigmaIsPolynomial) {
    // sup |B(x)| / (1 + |x|^{2 sigma}) over |x| <= 10 and over |x| <= 20 agree within 10%.
    const QuadratureSpec q{};
    BoundaryEvaluator B(BoundaryKind::Frac, BoundaryParams{0.6, 0, 1, q});
    double c10 = 0, c20 = 0;
    for (double x = 0; x <= 20.0; x += 0.25) {
        double r = std::abs(B.value({x})) / (1 + std::pow(x, 1.2));
        ASSERT_TRUE(std::isfinite(r));
        if (x <= 10) c10 = std::max(c10, r);
        c20 = std::max(c20, r);
    }
    EXPECT_GT(c10, 0);
    EXPECT_LE(c20 / c10, 1.10);
}

TEST(Boundary, ConstantInputReproducesBoundaryTerm) {
    const QuadratureSpec q{};
    FracPointwise op(0.5, 0, 1, q);
    Evaluable one;
    one.dim = 1;
    one.value = [](const Point&) { return 1.0; };
    one.gradient = [](const Point&) { return Point{0.0}; };
    for (double x : {-1.0, 0.0, 0.8, 2.5})
        EXPECT_NEAR(op(one, {x}), boundary_term_eval(BoundaryKind::Frac, BoundaryParams{0.5, 0, 1, q}, {x}), 1e-12);
}

TEST(Boundary, IntegralOfOneEqualsSpectralLimit) {
    // H^{-sigma} 1 at x via e^{-tH}1: t-domain integral of heat_of_one.
    const QuadratureSpec q{};
    for (double x : {0.0, 1.5}) {
        double ref = oracle::integrate_half_line([&](double t) {
                         return std::pow(std::cosh(2 * t), -0.5) * std::exp(-0.5 * std::tanh(2 * t) * x * x) *
                                std::pow(t, 0.4 - 1);
                     }) /
                     std::tgamma(0.4);
        EXPECT_NEAR(boundary_term_eval(BoundaryKind::IntegralOfOne, BoundaryParams{0.4, 0, 1, q}, {x}), ref, 1e-8);
    }
}
