#include <gtest/gtest.h>

#include "hfrac/estimate_lab.hpp"
#include "hfrac/pointwise.hpp"
#include "hfrac/test_functions.hpp"

using namespace hfrac;

namespace {

const QuadratureSpec kQ{};

Evaluable as_function(std::function<double(const Point&)> f, std::size_t n = 1) {
    Evaluable u;
    u.dim = n;
    u.value = std::move(f);
    return u;
}

}  // namespace

TEST(FracPointwise, GroundStateIsFixed) {
    const Evaluable h0 = make_function("h0", 1);
    for (double s : {0.2, 0.5, 0.8}) {
        FracPointwise op(s, 0, 1, kQ);
        for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5}) EXPECT_NEAR(op(h0, {x}), h0({x}), 1e-6) << s << " " << x;
    }
}

TEST(FracPointwise, SecondHermiteFunction) {
    const Evaluable h2 = make_function("h2", 1);
    for (double x : {-2.0, -0.7, 0.0, 0.3, 1.9}) EXPECT_NEAR(frac_pointwise(h2, 0.5, {x}, kQ), std::sqrt(5.0) * h2({x}), 1e-6);
}

TEST(FracPointwise, TwoDimensionalEigenfunction) {
    const Evaluable h = make_function("hermite:1,2", 2);
    FracPointwise op(0.35, 0, 2, kQ);
    for (Point x : {Point{0.2, -0.4}, Point{1.0, 0.5}}) EXPECT_NEAR(op(h, x), std::pow(8.0, 0.35) * h(x), 1e-6);
}

TEST(FracPointwise, ShiftedPowers) {
    // (H + 2)^sigma and (H - 2)^sigma on h_3: eigenvalues 9 and 5.
    const Evaluable h3 = make_function("h3", 1);
    FracPointwise plus(0.5, 2, 1, kQ), minus(0.5, -2, 1, kQ);
    for (double x : {-1.0, 0.4, 1.7}) {
        EXPECT_NEAR(plus(h3, {x}), 3.0 * h3({x}), 1e-6);
        EXPECT_NEAR(minus(h3, {x}), std::sqrt(5.0) * h3({x}), 1e-6);
    }
}

TEST(FracPointwise, RegularityPreconditions) {
    Evaluable rough = make_function("gauss:0,1", 1);
    rough.k = 0;
    rough.alpha = 0.5;
    rough.gradient = nullptr;
    EXPECT_THROW(frac_pointwise(rough, 0.4, {0.0}, kQ), PreconditionError);
    rough.k = 1;
    EXPECT_THROW(frac_pointwise(rough, 0.4, {0.0}, kQ), PreconditionError);
    EXPECT_THROW(FracPointwise(1.0, 0, 1, kQ), PreconditionError);
    EXPECT_THROW(FracPointwise(0.5, 1, 1, kQ), PreconditionError);
}

TEST(FracPointwise, PrincipalValueFailureIsReported) {
    QuadratureSpec q = kQ;
    q.pv_tolerance = 0.0;
    q.pv_delta = 0.5;
    const Evaluable g = make_function("modgauss:0,0.3,4", 1);
    try {
        frac_pointwise(g, 0.9, {0.1}, q);
        FAIL() << "expected a numerical error";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("delta/2"), std::string::npos) << e.what();
    }
}

TEST(FracPointwise, ShellExponent) {
    auto r = pv_shell_exponent(0.5, 0.5);
    EXPECT_NEAR(r.predicted, 0.5, 1e-15);
    EXPECT_NEAR(r.measured, r.predicted, 0.1);
}

TEST(FracIntPointwise, GroundState) {
    const Evaluable h0 = make_function("h0", 1);
    for (double s : {0.3, 0.7})
        for (double x : {-1.0, 0.0, 2.0}) EXPECT_NEAR(fracint_pointwise(h0, s, {x}, kQ), h0({x}), 1e-6);
}

TEST(FracIntPointwise, FourthHermiteSigmaOne) {
    const Evaluable h4 = make_function("h4", 1);
    for (double x : {-1.5, 0.0, 0.6}) EXPECT_NEAR(fracint_pointwise(h4, 1.0, {x}, kQ), h4({x}) / 9.0, 1e-6);
}

TEST(FracIntPointwise, InvertsFracPointwise) {
    const Evaluable u = make_function("gauss:0.3,0.8", 1);
    FracPointwise H(0.4, 0, 1, kQ);
    Evaluable Hu = as_function([&](const Point& x) { return H(u, x); });
    FracIntPointwise I(0.4, 1, kQ);
    for (double x : {-1.0, 0.0, 0.3, 1.2}) EXPECT_NEAR(I(Hu, {x}), u({x}), 1e-5);
}

TEST(FracIntPointwise, SigmaRange) {
    EXPECT_THROW(FracIntPointwise(0.0, 1, kQ), PreconditionError);
    EXPECT_THROW(FracIntPointwise(1.2, 1, kQ), PreconditionError);
}

TEST(Pointwise, DimensionMismatch) {
    const Evaluable h = make_function("h1", 1);
    FracPointwise op(0.5, 0, 1, kQ);
    EXPECT_THROW(op.stencil({0.0, 1.0}), DimensionError);
}
