#pragma once

// Pointwise kernel formulas for H^sigma, (H +- 2k)^sigma and H^{-sigma}.
// Every evaluation at a point x is a linear functional of u: a weighted sum of
// samples u(z_i), plus multiples of u(x) and of grad u(x). The functional is
// assembled once per (operator, x) and can be applied to many functions.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/frac_ops.hpp"
#include "hfrac/function.hpp"
#include "hfrac/quadrature.hpp"

namespace hfrac {

struct PolarDirections {
    std::size_t n = 1;
    std::vector<double> e;  // flat, n per direction; closed under e -> -e
    std::vector<double> w;  // sum of weights = area of the unit sphere
    std::size_t count() const { return w.size(); }
};

inline PolarDirections polar_directions(std::size_t n, const QuadratureSpec& q) {
    PolarDirections d;
    d.n = n;
    if (n == 1) {
        d.e = {1.0, -1.0};
        d.w = {1.0, 1.0};
    } else if (n == 2) {
        const int M = q.directions;
        for (int k = 0; k < M; ++k) {
            double th = 2.0 * std::numbers::pi * (k + 0.5) / M;
            d.e.push_back(std::cos(th));
            d.e.push_back(std::sin(th));
            d.w.push_back(2.0 * std::numbers::pi / M);
        }
    } else if (n == 3) {
        const int M = q.directions;
        auto g = gauss_legendre(q.polar_nodes);
        for (std::size_t a = 0; a < g.x.size(); ++a) {
            double ct = g.x[a], st = std::sqrt(1.0 - ct * ct);
            for (int k = 0; k < M; ++k) {
                double ph = 2.0 * std::numbers::pi * (k + 0.5) / M;
                d.e.push_back(st * std::cos(ph));
                d.e.push_back(st * std::sin(ph));
                d.e.push_back(ct);
                d.w.push_back(g.w[a] * 2.0 * std::numbers::pi / M);
            }
        }
    } else {
        throw PreconditionError("polar_directions: dimension must be 1, 2 or 3");
    }
    return d;
}

/// Radial panels on [r_min, r_max]: geometric up to 1, then width 0.5 up to 8, then width 2.
inline std::vector<double> radial_edges(double r_min, double r_max) {
    require(r_min > 0 && r_max > r_min, "radial_edges: need 0 < r_min < r_max");
    std::vector<double> e{r_min};
    double r = r_min;
    while (r < 1.0 && r < r_max) {
        r = std::min({2.0 * r, 1.0, r_max});
        e.push_back(r);
    }
    while (e.back() < r_max) {
        double step = e.back() < 8.0 ? 0.5 : 2.0;
        double nxt = std::min(e.back() + step, r_max);
        if (r_max - nxt < 0.25 * step) nxt = r_max;
        e.push_back(nxt);
    }
    return e;
}

struct RadialRule {
    std::vector<double> r, w;
};

inline RadialRule radial_rule(double r_min, double r_max, int gl_order) {
    RadialRule rr;
    composite_nodes(radial_edges(r_min, r_max), gauss_legendre(gl_order), rr.r, rr.w);
    return rr;
}

/// sum_i w_i u(z_i) + c u(x) + g . grad u(x)
class LinearFunctional {
public:
    LinearFunctional() = default;
    explicit LinearFunctional(const Point& x) : x_(x), grad_(x.size(), 0.0) {}

    const Point& at() const { return x_; }
    std::size_t nodes() const { return weights_.size(); }
    double center() const { return center_; }
    const Point& grad_weights() const { return grad_; }

    void add_node(const double* z, double w) {
        coords_.insert(coords_.end(), z, z + x_.size());
        weights_.push_back(w);
    }
    void add_center(double w) { center_ += w; }
    void add_grad(std::size_t j, double w) {
        grad_[j] += w;
        uses_grad_ = true;
    }
    bool uses_gradient() const { return uses_grad_; }

    double apply(const Evaluable& u) const {
        require_dim(u.dim, x_.size(), "LinearFunctional::apply");
        const std::size_t n = x_.size();
        Point z(n);
        double s = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            for (std::size_t d = 0; d < n; ++d) z[d] = coords_[i * n + d];
            s += weights_[i] * u(z);
        }
        if (center_ != 0.0) s += center_ * u(x_);
        if (uses_grad_) {
            if (!u.has_gradient()) throw PreconditionError("LinearFunctional: gradient data required");
            Point g = u.gradient(x_);
            for (std::size_t d = 0; d < n; ++d) s += grad_[d] * g[d];
        }
        return s;
    }

private:
    Point x_;
    std::vector<double> coords_;
    std::vector<double> weights_;
    double center_ = 0.0;
    Point grad_;
    bool uses_grad_ = false;
};

/// Adds  sign * int_{r_a<|z-x|<r_b} (u(z) - u(x)) K(z) dz  to f by polar quadrature.
template <class Kernel>
void add_ring(LinearFunctional& f, const PolarDirections& dirs, const RadialRule& rr, Kernel&& K, double sign) {
    const Point& x = f.at();
    const std::size_t n = x.size();
    Point z(n);
    for (std::size_t d = 0; d < dirs.count(); ++d) {
        const double* e = &dirs.e[d * n];
        for (std::size_t k = 0; k < rr.r.size(); ++k) {
            const double r = rr.r[k];
            for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + r * e[i];
            double wt = sign * rr.w[k] * std::pow(r, double(n) - 1.0) * dirs.w[d] * K(z);
            if (wt == 0.0) continue;
            f.add_node(z.data(), wt);
            f.add_center(-wt);
        }
    }
}

/// Inner-shell coefficients of the principal value. With K_even the kernel with the
/// x.(z-x) coupling removed:  P0 = int_0^delta r^{n+1} K_even dr,  Q0 = int_0^delta r^{n+3} K_even dr,
/// and P1 is P0 with one extra factor s inside the s-integral (the odd part).
struct ShellMoments {
    double P0 = 0.0, Q0 = 0.0, P1 = 0.0;
};

inline ShellMoments pv_shell_moments(const KernelSpec& ks, const Point& x, double delta) {
    require(!ks.is_integral(), "pv_shell_moments: only for fractional powers");
    SMeasureRule rule(ks.rho(), ks.quad);
    const double n = double(ks.dim), a = 0.5 * n + 1.0, kappa = ks.kappa();
    double x2 = 0.0;
    for (double v : x) x2 += v * v;
    const double d2 = delta * delta;
    const double kw = ks.kind == KernelKind::ShiftMinus ? -double(ks.k) : double(ks.k);
    const double pref = kappa * std::pow(std::numbers::pi, -0.5 * n);
    // Radial integrals: int_0^delta r^{n+1+2j} e^{-r^2/(4s)} dr = (1/2)(4s)^{n/2+1+j} gamma(n/2+1+j, delta^2/(4s)).
    auto envelope_lower = [&](double s) {
        return pref * std::exp(0.5 * n * std::log1p(-s * s) - s * x2 + kw * (std::log1p(-s) - std::log1p(s)));
    };
    auto p0 = [&](double env, double s) { return env * 2.0 * s * boost::math::tgamma_lower(a, d2 / (4.0 * s)); };
    auto q0 = [&](double env, double s) { return env * 8.0 * s * s * boost::math::tgamma_lower(a + 1.0, d2 / (4.0 * s)); };
    ShellMoments m;
    for (const auto& nd : rule.lower()) {
        double env = envelope_lower(nd.s);
        double b = p0(env, nd.s);
        m.P0 += nd.w * b;
        m.P1 += nd.w * b * nd.s;
        m.Q0 += nd.w * q0(env, nd.s);
    }
    m.P0 += rule.endpoint_cell([&](const SNode& nd) { return p0(envelope_lower(nd.s), nd.s); }, 1.0 - ks.sigma);
    m.P1 += rule.endpoint_cell([&](const SNode& nd) { return p0(envelope_lower(nd.s), nd.s) * nd.s; }, 2.0 - ks.sigma);
    m.Q0 += rule.endpoint_cell([&](const SNode& nd) { return q0(envelope_lower(nd.s), nd.s); }, 2.0 - ks.sigma);
    if (ks.kind != KernelKind::ShiftMinus) {
        for (const auto& nd : rule.upper()) {
            double s = nd.s, t = nd.t;
            double env = pref * std::exp(-n * detail::log_cosh(t) - s * x2 - 2.0 * kw * t);
            double b = p0(env, s);
            m.P0 += nd.w * b;
            m.P1 += nd.w * b * s;
            m.Q0 += nd.w * q0(env, s);
        }
    }
    return m;
}

/// Principal-value correction for |z - x| < delta. The even part
/// S(r,e) = 2u(x) - u(x+re) - u(x-re) is fitted as a r^2 + b r^4 from r = delta, delta/2;
/// the odd part D(r,e) = u(x-re) - u(x+re) comes either from samples at delta or from grad u(x).
struct InnerCorrection {
    LinearFunctional even;
    LinearFunctional odd_samples;
    LinearFunctional odd_gradient;
    double apply(const Evaluable& u) const {
        return even.apply(u) + (u.has_gradient() ? odd_gradient.apply(u) : odd_samples.apply(u));
    }
};

inline InnerCorrection pv_inner_correction(const KernelSpec& ks, const Point& x, double delta,
                                           const PolarDirections& dirs) {
    const std::size_t n = x.size();
    ShellMoments m = pv_shell_moments(ks, x, delta);
    InnerCorrection c{LinearFunctional(x), LinearFunctional(x), LinearFunctional(x)};
    const double d2 = delta * delta, d4 = d2 * d2;
    // inner even = (1/2) sum_e w_e [a_e P0 + b_e Q0] with
    // a = (16 S_h - S_d)/(3 d^2), b = 4 (S_d - 4 S_h)/(3 d^4).
    const double coef_d = -m.P0 / (3.0 * d2) + 4.0 * m.Q0 / (3.0 * d4);
    const double coef_h = 16.0 * m.P0 / (3.0 * d2) - 16.0 * m.Q0 / (3.0 * d4);
    Point zp(n), zm(n), hp(n), hm(n);
    for (std::size_t d = 0; d < dirs.count(); ++d) {
        const double* e = &dirs.e[d * n];
        double xe = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            zp[i] = x[i] + delta * e[i];
            zm[i] = x[i] - delta * e[i];
            hp[i] = x[i] + 0.5 * delta * e[i];
            hm[i] = x[i] - 0.5 * delta * e[i];
            xe += x[i] * e[i];
        }
        const double w = 0.5 * dirs.w[d];
        c.even.add_center(2.0 * w * (coef_d + coef_h));
        c.even.add_node(zp.data(), -w * coef_d);
        c.even.add_node(zm.data(), -w * coef_d);
        c.even.add_node(hp.data(), -w * coef_h);
        c.even.add_node(hm.data(), -w * coef_h);
        // -(1/2)(x.e) P1 D/delta, D ~ -2 delta grad u . e
        const double co = w * xe * m.P1 / delta;
        c.odd_samples.add_node(zm.data(), -co);
        c.odd_samples.add_node(zp.data(), co);
        for (std::size_t j = 0; j < n; ++j) c.odd_gradient.add_grad(j, 2.0 * w * xe * m.P1 * e[j]);
    }
    return c;
}

/// Linear functional for (H + shift)^sigma u(x), with a delta/2 companion for the
/// principal-value convergence check.
struct PVStencil {
    LinearFunctional outer;
    InnerCorrection inner;
    LinearFunctional ring_half;  // the shell delta/2 < |z-x| < delta
    InnerCorrection inner_half;
    double delta = 0.0;
};

struct PVResult {
    double value = 0.0;
    double value_half = 0.0;  // same with delta/2
};

class FracPointwise {
public:
    /// shift = 0: H^sigma; shift = +2k: (H+2k)^sigma; shift = -2k: (H-2k)^sigma.
    FracPointwise(double sigma, int shift, std::size_t n, const QuadratureSpec& q)
        : sigma_(sigma), shift_(shift), q_(q), dirs_(polar_directions(n, q)) {
        if (!(sigma > 0.0 && sigma < 1.0)) throw PreconditionError("frac_pointwise: sigma must lie in (0,1)");
        require(shift % 2 == 0, "frac_pointwise: shift must be even");
        ks_.kind = shift == 0 ? KernelKind::FracPower : shift > 0 ? KernelKind::ShiftPlus : KernelKind::ShiftMinus;
        ks_.sigma = sigma;
        ks_.k = std::abs(shift) / 2;
        ks_.dim = n;
        ks_.quad = q;
        kernel_ = std::make_shared<KernelEvaluator>(ks_);
        BoundaryKind bk = shift == 0 ? BoundaryKind::Frac : shift > 0 ? BoundaryKind::ShiftPlus : BoundaryKind::ShiftMinus;
        boundary_ = std::make_shared<BoundaryEvaluator>(bk, BoundaryParams{sigma, ks_.k, n, q});
        outer_ = radial_rule(q.pv_delta, q.box, q.gl_order);
        shell_ = radial_rule(0.5 * q.pv_delta, q.pv_delta, q.gl_order);
    }

    double sigma() const { return sigma_; }
    int shift() const { return shift_; }
    std::size_t dim() const { return ks_.dim; }
    const KernelEvaluator& kernel() const { return *kernel_; }
    const BoundaryEvaluator& boundary() const { return *boundary_; }

    PVStencil stencil(const Point& x) const {
        require_dim(x.size(), ks_.dim, "frac_pointwise");
        const double delta = q_.pv_delta;
        PVStencil st;
        st.delta = delta;
        st.outer = LinearFunctional(x);
        auto K = [&](const Point& z) { return kernel_->value(x, z); };
        add_ring(st.outer, dirs_, outer_, K, -1.0);
        st.outer.add_center(boundary_->value(x));
        st.inner = pv_inner_correction(ks_, x, delta, dirs_);
        st.ring_half = LinearFunctional(x);
        add_ring(st.ring_half, dirs_, shell_, K, -1.0);
        st.inner_half = pv_inner_correction(ks_, x, 0.5 * delta, dirs_);
        return st;
    }

    void check_regularity(const Evaluable& u) const {
        require_dim(u.dim, ks_.dim, "frac_pointwise");
        if (u.smooth()) return;
        const double gap = u.alpha - 2.0 * sigma_;
        if (u.k == 0 && gap <= 0.0) {
            std::ostringstream os;
            os << "frac_pointwise: 2sigma >= alpha (" << 2.0 * sigma_ << " >= " << u.alpha
               << ") requires C^{1,alpha}_H data with a gradient";
            throw PreconditionError(os.str());
        }
        if (u.k == 1 && !u.has_gradient())
            throw PreconditionError("frac_pointwise: C^{1,alpha}_H data must supply a gradient");
        if (u.k == 1 && gap <= -1.0 && u.alpha < 1.0)
            throw PreconditionError("frac_pointwise: alpha - 2sigma <= -1 requires C^{1,1}_H data");
    }

    PVResult apply(const PVStencil& st, const Evaluable& u) const {
        double base = st.outer.apply(u);
        PVResult r;
        r.value = base + st.inner.apply(u);
        r.value_half = base + st.ring_half.apply(u) + st.inner_half.apply(u);
        return r;
    }

    /// Evaluates and enforces the delta-halving acceptance test.
    double evaluate(const PVStencil& st, const Evaluable& u) const {
        check_regularity(u);
        PVResult r = apply(st, u);
        double diff = std::abs(r.value - r.value_half);
        if (diff > q_.pv_tolerance * std::max(1.0, std::abs(r.value))) {
            std::ostringstream os;
            os.precision(17);
            os << "frac_pointwise: principal value not converged at x=(";
            for (std::size_t i = 0; i < st.outer.at().size(); ++i) os << (i ? "," : "") << st.outer.at()[i];
            os << "): delta=" << st.delta << " gives " << r.value << ", delta/2 gives " << r.value_half
               << " (shift " << diff << ")";
            throw NumericalError(os.str());
        }
        return r.value;
    }

    double operator()(const Evaluable& u, const Point& x) const { return evaluate(stencil(x), u); }

private:
    double sigma_;
    int shift_;
    QuadratureSpec q_;
    PolarDirections dirs_;
    KernelSpec ks_;
    std::shared_ptr<KernelEvaluator> kernel_;
    std::shared_ptr<BoundaryEvaluator> boundary_;
    RadialRule outer_, shell_;
};

inline double frac_pointwise(const Evaluable& u, double sigma, const Point& x, const QuadratureSpec& spec) {
    FracPointwise op(sigma, 0, u.dim, spec);
    return op(u, x);
}

/// Radius below which the absolutely convergent integrals are truncated.
constexpr double kFracIntInnerRadius = 1e-7;

class FracIntPointwise {
public:
    /// (H + 2k)^{-sigma}; k = 0 is the fractional integral H^{-sigma}.
    FracIntPointwise(double sigma, std::size_t n, const QuadratureSpec& q, int k = 0)
        : sigma_(sigma), q_(q), dirs_(polar_directions(n, q)) {
        if (!(sigma > 0.0 && sigma <= 1.0)) throw PreconditionError("fracint_pointwise: sigma must lie in (0,1]");
        ks_.kind = k == 0 ? KernelKind::FracIntegral : KernelKind::ShiftPlusIntegral;
        ks_.sigma = sigma;
        ks_.k = k;
        ks_.dim = n;
        ks_.quad = q;
        kernel_ = std::make_shared<KernelEvaluator>(ks_);
        boundary_ = std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne, BoundaryParams{sigma, k, n, q});
        rule_ = radial_rule(kFracIntInnerRadius, q.box, q.gl_order);
    }

    const KernelEvaluator& kernel() const { return *kernel_; }
    const BoundaryEvaluator& boundary() const { return *boundary_; }

    LinearFunctional stencil(const Point& x) const {
        require_dim(x.size(), ks_.dim, "fracint_pointwise");
        LinearFunctional f(x);
        add_ring(f, dirs_, rule_, [&](const Point& z) { return kernel_->value(x, z); }, 1.0);
        f.add_center(boundary_->value(x));
        return f;
    }

    double operator()(const Evaluable& u, const Point& x) const {
        require_dim(u.dim, ks_.dim, "fracint_pointwise");
        return stencil(x).apply(u);
    }

private:
    double sigma_;
    QuadratureSpec q_;
    PolarDirections dirs_;
    KernelSpec ks_;
    std::shared_ptr<KernelEvaluator> kernel_;
    std::shared_ptr<BoundaryEvaluator> boundary_;
    RadialRule rule_;
};

inline double fracint_pointwise(const Evaluable& u, double sigma, const Point& x, const QuadratureSpec& spec) {
    FracIntPointwise op(sigma, u.dim, spec);
    return op(u, x);
}

}  // namespace hfrac
