#pragma once

// Ladder operators A_i = d_i + x_i, A_{-i} = -d_i + x_i and the Hermite-Riesz
// transforms R_i = A_i H^{-1/2}, R_ij = A_i A_j H^{-1}, R_i^* = H^{-1/2} A_i.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/frac_ops.hpp"
#include "hfrac/function.hpp"
#include "hfrac/hermite_basis.hpp"
#include "hfrac/pointwise.hpp"

namespace hfrac {

inline void check_ladder_index(int i, std::size_t n) {
    if (i == 0 || static_cast<std::size_t>(std::abs(i)) > n)
        throw PreconditionError("ladder index " + std::to_string(i) + " out of range for dimension " + std::to_string(n));
}

/// A_i h_nu = sqrt(2 nu_i) h_{nu - e_i};  A_{-i} h_nu = sqrt(2 nu_i + 2) h_{nu + e_i}.
inline SpectralCoeffs ladder_apply(int i, const SpectralCoeffs& c) {
    check_ladder_index(i, c.dimension());
    const std::size_t axis = static_cast<std::size_t>(std::abs(i) - 1);
    SpectralCoeffs r(c.dimension(), i > 0 ? c.max_degree() : c.max_degree() + 1);
    for (const auto& [nu, v] : c.entries()) {
        MultiIndex mu;
        if (i > 0) {
            if (!nu.shifted(axis, -1, mu)) continue;
            r.add(mu, std::sqrt(2.0 * nu[axis]) * v);
        } else {
            nu.shifted(axis, +1, mu);
            r.add(mu, std::sqrt(2.0 * nu[axis] + 2.0) * v);
        }
    }
    return r;
}

/// Applies a word right to left: {a, b} gives A_a A_b c.
inline SpectralCoeffs ladder_word_apply(const std::vector<int>& word, SpectralCoeffs c) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) c = ladder_apply(*it, c);
    return c;
}

/// (+-d_i + x_i) u(x); central differences with step h when u has no gradient and fd_step > 0.
inline double a_deriv_eval(int i, const Evaluable& u, const Point& x, double fd_step = 0.0) {
    require_dim(x.size(), u.dim, "a_deriv_eval");
    check_ladder_index(i, u.dim);
    const std::size_t axis = static_cast<std::size_t>(std::abs(i) - 1);
    double d;
    if (u.has_gradient()) {
        d = u.gradient(x)[axis];
    } else if (fd_step > 0.0) {
        Point y = x;
        y[axis] = x[axis] + fd_step;
        double up = u(y);
        y[axis] = x[axis] - fd_step;
        d = (up - u(y)) / (2.0 * fd_step);
    } else {
        throw PreconditionError("a_deriv_eval: no gradient available and finite differences not permitted");
    }
    return (i > 0 ? d : -d) + x[axis] * u(x);
}

/// The function A_i u; carries a gradient only when u can supply one by differences of its gradient.
inline Evaluable ladder_of(int i, const Evaluable& u, double fd_step = 0.0) {
    check_ladder_index(i, u.dim);
    Evaluable v;
    v.dim = u.dim;
    v.k = u.k >= kSmooth ? kSmooth : u.k - 1;
    v.alpha = u.alpha;
    v.name = "A" + std::to_string(i) + "(" + u.name + ")";
    auto uu = std::make_shared<Evaluable>(u);
    v.value = [uu, i, fd_step](const Point& x) { return a_deriv_eval(i, *uu, x, fd_step); };
    return v;
}

enum class RieszKind { First, Second, Adjoint };

inline std::string riesz_kind_name(RieszKind k) {
    switch (k) {
        case RieszKind::First: return "R_i";
        case RieszKind::Second: return "R_ij";
        case RieszKind::Adjoint: return "R_i^*";
    }
    return "?";
}

inline SpectralCoeffs riesz_spectral(RieszKind kind, const std::vector<int>& idx, const SpectralCoeffs& c) {
    switch (kind) {
        case RieszKind::First:
            require(idx.size() == 1, "riesz_spectral: R_i takes one index");
            return ladder_apply(idx[0], multiplier_apply({-0.5, 0}, c));
        case RieszKind::Second:
            require(idx.size() == 2, "riesz_spectral: R_ij takes two indices");
            return ladder_apply(idx[0], ladder_apply(idx[1], multiplier_apply({-1.0, 0}, c)));
        case RieszKind::Adjoint:
            require(idx.size() == 1, "riesz_spectral: R_i^* takes one index");
            return multiplier_apply({-0.5, 0}, ladder_apply(idx[0], c));
    }
    throw PreconditionError("riesz_spectral: unknown kind");
}

enum class RieszKernelKind {
    FirstOrder,   // A_i F_{-1/2}
    SecondOrder,  // R_ij = A_i A_j F_{-1}
    ShiftedFirst  // A_i F_{2,-1/2}
};

/// Kernels of the Riesz transforms, derivatives taken under the s-integral.
class RieszKernel {
public:
    RieszKernel(RieszKernelKind kind, std::vector<int> idx, std::size_t n, const QuadratureSpec& q)
        : kind_(kind), idx_(std::move(idx)) {
        require(idx_.size() == (kind == RieszKernelKind::SecondOrder ? 2u : 1u), "RieszKernel: wrong index count");
        for (int i : idx_) check_ladder_index(i, n);
        KernelSpec ks;
        ks.dim = n;
        ks.quad = q;
        if (kind == RieszKernelKind::SecondOrder) {
            ks.kind = KernelKind::FracIntegral;
            ks.sigma = 1.0;
        } else if (kind == RieszKernelKind::FirstOrder) {
            ks.kind = KernelKind::FracIntegral;
            ks.sigma = 0.5;
        } else {
            ks.kind = KernelKind::ShiftPlusIntegral;
            ks.sigma = 0.5;
            ks.k = 1;
        }
        base_ = std::make_shared<KernelEvaluator>(ks);
    }

    const KernelEvaluator& base() const { return *base_; }
    RieszKernelKind kind() const { return kind_; }
    const std::vector<int>& indices() const { return idx_; }

    double operator()(const Point& x, const Point& z) const {
        require_dim(x.size(), z.size(), "riesz_kernel_eval");
        bool diag = true;
        for (std::size_t i = 0; i < x.size(); ++i) diag = diag && x[i] == z[i];
        if (diag) throw DomainError("riesz_kernel_eval: kernel is singular on the diagonal");
        auto M = base_->moments(x, z);
        if (kind_ == RieszKernelKind::SecondOrder) return KernelEvaluator::ladder2_from(M, idx_[0], idx_[1], x, z);
        return KernelEvaluator::ladder_from(M, idx_[0], x, z);
    }

private:
    RieszKernelKind kind_;
    std::vector<int> idx_;
    std::shared_ptr<KernelEvaluator> base_;
};

inline double riesz_kernel_eval(RieszKernelKind kind, const std::vector<int>& idx, const Point& x, const Point& z,
                                const QuadratureSpec& q = {}) {
    return RieszKernel(kind, idx, x.size(), q)(x, z);
}

/// Ladder derivatives of a boundary function B from its jet: A_a B and A_a A_b B.
inline double ladder_of_jet(const BoundaryJet& J, int a, const Point& x) {
    const std::size_t i = static_cast<std::size_t>(std::abs(a) - 1);
    return (a > 0 ? 1.0 : -1.0) * J.grad[i] + x[i] * J.value;
}

inline double ladder2_of_jet(const BoundaryJet& J, int a, int b, const Point& x) {
    const std::size_t n = x.size();
    const std::size_t i = static_cast<std::size_t>(std::abs(a) - 1), j = static_cast<std::size_t>(std::abs(b) - 1);
    const double eps = a > 0 ? 1.0 : -1.0, eta = b > 0 ? 1.0 : -1.0;
    double v = eps * eta * J.hess[i * n + j] + eps * x[j] * J.grad[i] + eta * x[i] * J.grad[j] + x[i] * x[j] * J.value;
    if (i == j) v += eps * J.value;
    return v;
}

/// Radius below which the (bounded) Riesz integrands are dropped.
constexpr double kRieszInnerRadius = 1e-8;

/// Pointwise R_i, R_ij and the adjoints:
///   First:   R_i u(x)  = int (u(z)-u(x)) A_i F_{-1/2} dz + u(x) A_i H^{-1/2} 1(x)
///   Second:  R_ij u(x) = int (u(z)-u(x)) A_i A_j F_{-1} dz + u(x) A_i A_j H^{-1} 1(x)
///   Adjoint: R_i^* u  = H^{-1/2}(A_i u); for i < 0 also A_i (H+2)^{-1/2} u via shifted_adjoint.
class RieszPointwise {
public:
    RieszPointwise(RieszKind kind, std::vector<int> idx, std::size_t n, const QuadratureSpec& q,
                   bool shifted_adjoint = false)
        : kind_(kind), idx_(std::move(idx)), n_(n), q_(q), dirs_(polar_directions(n, q)), shifted_(shifted_adjoint) {
        for (int i : idx_) check_ladder_index(i, n);
        rule_ = radial_rule(kRieszInnerRadius, q.box, q.gl_order);
        if (kind == RieszKind::First) {
            require(idx_.size() == 1, "riesz_pointwise: R_i takes one index");
            kernel_ = std::make_shared<RieszKernel>(RieszKernelKind::FirstOrder, idx_, n, q);
            boundary_ = std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne, BoundaryParams{0.5, 0, n, q});
        } else if (kind == RieszKind::Second) {
            require(idx_.size() == 2, "riesz_pointwise: R_ij takes two indices");
            kernel_ = std::make_shared<RieszKernel>(RieszKernelKind::SecondOrder, idx_, n, q);
            boundary_ = std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne, BoundaryParams{1.0, 0, n, q});
        } else {
            require(idx_.size() == 1, "riesz_pointwise: R_i^* takes one index");
            if (shifted_) {
                require(idx_[0] < 0, "riesz_pointwise: the shifted adjoint route is for negative indices");
                kernel_ = std::make_shared<RieszKernel>(RieszKernelKind::ShiftedFirst, idx_, n, q);
                boundary_ =
                    std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne, BoundaryParams{0.5, 1, n, q});
            } else {
                fracint_ = std::make_shared<FracIntPointwise>(0.5, n, q);
            }
        }
    }

    LinearFunctional stencil(const Point& x) const {
        require_dim(x.size(), n_, "riesz_pointwise");
        if (fracint_) return fracint_->stencil(x);
        LinearFunctional f(x);
        add_ring(f, dirs_, rule_, [&](const Point& z) { return (*kernel_)(x, z); }, 1.0);
        if (kind_ == RieszKind::Second)
            f.add_center(ladder2_of_jet(boundary_->jet(x, 2), idx_[0], idx_[1], x));
        else
            f.add_center(ladder_of_jet(boundary_->jet(x, 1), idx_[0], x));
        return f;
    }

    /// Applies a stencil from stencil(x); for the plain adjoint route the input is A_i u.
    double apply(const LinearFunctional& st, const Evaluable& u) const {
        if (fracint_) return st.apply(ladder_of(idx_[0], u, 1e-5));
        return st.apply(u);
    }

    double operator()(const Evaluable& u, const Point& x) const { return apply(stencil(x), u); }

private:
    RieszKind kind_;
    std::vector<int> idx_;
    std::size_t n_;
    QuadratureSpec q_;
    PolarDirections dirs_;
    bool shifted_;
    RadialRule rule_;
    std::shared_ptr<RieszKernel> kernel_;
    std::shared_ptr<BoundaryEvaluator> boundary_;
    std::shared_ptr<FracIntPointwise> fracint_;
};

inline double riesz_pointwise(RieszKind kind, const std::vector<int>& idx, const Evaluable& u, const Point& x,
                              const QuadratureSpec& q = {}) {
    return RieszPointwise(kind, idx, u.dim, q)(u, x);
}

}  // namespace hfrac
