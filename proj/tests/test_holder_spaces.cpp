#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>

#include "hfrac/holder_spaces.hpp"
#include "hfrac/test_functions.hpp"
#include "oracle.hpp"

using namespace hfrac;

namespace {

double brute_holder(const GridFunction& g, double alpha) {
    double best = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            Point a = g.point(i), b = g.point(j);
            double d2 = 0;
            for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
            best = std::max(best, std::abs(g[i] - g[j]) / std::pow(std::sqrt(d2), alpha));
        }
    return best;
}

}  // namespace

TEST(HolderSeminorm, ConstantIsZero) {
    auto g = GridFunction::sample(2, 2.0, 0.25, [](const Point&) { return 5.0; });
    EXPECT_EQ(seminorm_holder(g, 0.5).value, 0.0);
}

TEST(HolderSeminorm, IdentityLipschitz) {
    auto g = GridFunction::sample(1, 3.0, 0.1, [](const Point& x) { return x[0]; });
    EXPECT_NEAR(seminorm_holder(g, 1.0).value, 1.0, 1e-12);
}

TEST(HolderSeminorm, GroundStateAgainstBruteForce) {
    const Evaluable h0 = make_function("h0", 1);
    auto coarse = GridFunction::sample(1, 4.0, 0.05, h0.value);
    auto fine = GridFunction::sample(1, 4.0, 0.025, h0.value);
    const double est = seminorm_holder(coarse, 0.5).value;
    const double ref = brute_holder(fine, 0.5);
    EXPECT_NEAR(est, ref, 0.02 * ref);
}

TEST(HolderSeminorm, TwoDimensionsAgainstBruteForce) {
    auto f = make_function("gauss:0.2,0.7", 2);
    auto g = GridFunction::sample(2, 2.0, 0.2, f.value);
    HolderOptions opt;
    opt.near_radius = 4.0;
    EXPECT_NEAR(seminorm_holder(g, 0.6, opt).value, brute_holder(g, 0.6), 1e-12);
}

TEST(HolderSeminorm, ReportsAttainingPair) {
    auto g = GridFunction::sample(1, 1.0, 0.5, [](const Point& x) { return x[0] > 0.25 ? 1.0 : 0.0; });
    auto e = seminorm_holder(g, 1.0);
    EXPECT_NEAR(e.value, 2.0, 1e-15);
    EXPECT_NEAR(e.x1[0], 0.0, 1e-15);
    EXPECT_NEAR(e.x2[0], 0.5, 1e-15);
}

TEST(HolderSeminorm, Preconditions) {
    auto g = GridFunction::sample(1, 1.0, 0.5, [](const Point& x) { return x[0]; });
    EXPECT_THROW(seminorm_holder(g, 0.0), PreconditionError);
    EXPECT_THROW(seminorm_holder(g, 1.5), PreconditionError);
    EXPECT_THROW(GridFunction(1, 0.0, 0.5), PreconditionError);
}

TEST(WeightSeminorm, ZeroFunction) {
    GridFunction g(2, 2.0, 0.5);
    auto e = seminorm_weight(g, 0.5);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_FALSE(e.on_boundary);
}

TEST(WeightSeminorm, GroundStateMaximum) {
    // sup (1+|x|)^{1/2} h_0(x) is attained at x = (sqrt 3 - 1)/2.
    auto f = [](double x) { return -std::sqrt(1 + std::abs(x)) * oracle::hermite_fn(0, x); };
    auto [xm, fm] = boost::math::tools::brent_find_minima(f, 0.0, 1.0, 50);
    EXPECT_NEAR(xm, (std::sqrt(3.0) - 1) / 2, 1e-7);
    const double frozen = 0.82101237999404253;
    EXPECT_NEAR(-fm, frozen, 1e-14);
    const Evaluable h0 = make_function("h0", 1);
    auto e = seminorm_weight(GridFunction::sample(1, 5.0, 0.002, h0.value), 0.5);
    EXPECT_LE(e.value, frozen + 1e-15);
    EXPECT_NEAR(e.value, frozen, 1e-5);
    EXPECT_NEAR(std::abs(e.x[0]), 0.366, 2e-3);
    EXPECT_FALSE(e.on_boundary);
}

TEST(WeightSeminorm, BoundaryFlag) {
    auto g = GridFunction::sample(1, 3.0, 0.5, [](const Point&) { return 1.0; });
    auto e = seminorm_weight(g, 0.5);
    EXPECT_NEAR(e.value, 2.0, 1e-15);
    EXPECT_TRUE(e.on_boundary);
}

TEST(CkNorm, OrderZeroIsSumOfSeminorms) {
    const Evaluable f = make_function("gauss:0,1", 1);
    auto g = GridFunction::sample(1, 4.0, 0.05, f.value);
    auto r = norm_ck_alpha(g, 0, 0.5);
    EXPECT_DOUBLE_EQ(r.ck_norm, seminorm_weight(g, 0.5).value + seminorm_holder(g, 0.5).value);
    EXPECT_EQ(r.terms.size(), 2u);
}

TEST(CkNorm, OrderOneGroundState) {
    SpectralCoeffs c(1, 2);
    c.set(MultiIndex{0}, 1.0);
    auto g = grid_from_spectral(c, 4.0, 0.05, 1);
    ASSERT_TRUE(g.has({1}));
    ASSERT_TRUE(g.has({-1}));
    // A_1 h_0 = 0 and A_{-1} h_0 = sqrt 2 h_1.
    for (std::size_t p = 0; p < g.size(); p += 7) {
        EXPECT_NEAR(g.derivative({1})[p], 0.0, 1e-14);
        EXPECT_NEAR(g.derivative({-1})[p], std::sqrt(2.0) * oracle::hermite_fn(1, g.point(p)[0]), 1e-13);
    }
    auto r = norm_ck_alpha(g, 1, 0.5);
    double want = seminorm_weight(g, 0.5).value + seminorm_weight(g.derivative({1}), 0.5).value +
                  seminorm_weight(g.derivative({-1}), 0.5).value + seminorm_holder(g.derivative({1}), 0.5).value +
                  seminorm_holder(g.derivative({-1}), 0.5).value;
    EXPECT_NEAR(r.ck_norm, want, 1e-14 * want);
    EXPECT_EQ(r.terms.size(), 5u);
}

TEST(CkNorm, Homogeneity) {
    SpectralCoeffs c(2, 4);
    c.set(MultiIndex{1, 0}, 0.7);
    c.set(MultiIndex{0, 2}, -0.4);
    auto g = grid_from_spectral(c, 2.0, 0.25, 1);
    auto r1 = norm_ck_alpha(g, 1, 0.4);
    auto r2 = norm_ck_alpha(g.scaled(-3.0), 1, 0.4);
    EXPECT_NEAR(r2.ck_norm, 3.0 * r1.ck_norm, 1e-12 * r2.ck_norm);
}

TEST(CkNorm, MissingWordIsNamed) {
    auto g = GridFunction::sample(1, 2.0, 0.5, [](const Point& x) { return x[0]; });
    g.attach({1}, GridFunction(1, 2.0, 0.5));
    try {
        norm_ck_alpha(g, 1, 0.5);
        FAIL() << "expected a precondition error";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find(word_str({-1})), std::string::npos) << e.what();
    }
}
