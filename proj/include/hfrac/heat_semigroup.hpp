#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/grid.hpp"
#include "hfrac/hermite_basis.hpp"
#include "hfrac/quadrature.hpp"

namespace hfrac {

inline double meda_t_of_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("meda_t_of_s: s must lie in (0,1)");
    return std::atanh(s);
}

inline double meda_s_of_t(double t) {
    if (!(t > 0.0) || std::isinf(t)) throw DomainError("meda_s_of_t: t must be positive and finite");
    return std::tanh(t);
}

inline double mu_density(double s, double rho) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("mu_density: s must lie in (0,1)");
    return mu_density_unchecked(s, rho);
}

namespace detail {
inline double log_sinh(double a) {
    return a > 20.0 ? a - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * a)) : std::log(std::sinh(a));
}
inline double log_cosh(double a) {
    a = std::abs(a);
    return a - std::numbers::ln2 + std::log1p(std::exp(-2.0 * a));
}
inline void sq_sum_diff(const Point& x, const Point& z, double& plus, double& minus, double& dot) {
    plus = minus = dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = x[i] + z[i], m = x[i] - z[i];
        plus += p * p;
        minus += m * m;
        dot += x[i] * z[i];
    }
}
}  // namespace detail

/// G_t(x,z) = (2 pi sinh 2t)^{-n/2} exp(-[|x-z|^2 coth(2t)/2 + x.z tanh t]).
inline double heat_kernel(double t, const Point& x, const Point& z) {
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    require_dim(x.size(), z.size(), "heat_kernel");
    double plus, minus, dot;
    detail::sq_sum_diff(x, z, plus, minus, dot);
    const double n = double(x.size());
    double expo = 0.5 * minus / std::tanh(2.0 * t) + dot * std::tanh(t);
    return std::exp(-0.5 * n * (std::log(2.0 * std::numbers::pi) + detail::log_sinh(2.0 * t)) - expo);
}

/// Same kernel in the s = tanh t parametrization.
inline double heat_kernel_s(double s, const Point& x, const Point& z) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("heat_kernel_s: s must lie in (0,1)");
    require_dim(x.size(), z.size(), "heat_kernel_s");
    double plus, minus, dot;
    detail::sq_sum_diff(x, z, plus, minus, dot);
    const double n = double(x.size());
    double c = (1.0 - s) * (1.0 + s) / (4.0 * std::numbers::pi * s);
    return std::pow(c, 0.5 * n) * std::exp(-0.25 * (s * plus + minus / s));
}

/// Mehler kernel: sum_j r^j sum_{|nu|=j} h_nu(x) h_nu(z).
inline double mehler(double r, const Point& x, const Point& z) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("mehler: r must lie in (0,1)");
    require_dim(x.size(), z.size(), "mehler");
    double plus, minus, dot;
    detail::sq_sum_diff(x, z, plus, minus, dot);
    const double n = double(x.size());
    double expo = 0.25 * ((1.0 - r) / (1.0 + r) * plus + (1.0 + r) / (1.0 - r) * minus);
    return std::pow(std::numbers::pi, -0.5 * n) * std::pow((1.0 - r) * (1.0 + r), -0.5 * n) * std::exp(-expo);
}

/// E_j(x,z) = sum_{|nu|=j} h_nu(x) h_nu(z) for j = 0..J.
inline std::vector<double> hermite_shell_products(const Point& x, const Point& z, int J) {
    require_dim(x.size(), z.size(), "hermite_shell_products");
    std::vector<double> acc(static_cast<std::size_t>(J) + 1, 0.0);
    acc[0] = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        auto hx = hermite_table_1d(J, x[d]);
        auto hz = hermite_table_1d(J, z[d]);
        std::vector<double> next(acc.size(), 0.0);
        for (int a = 0; a <= J; ++a) {
            if (acc[static_cast<std::size_t>(a)] == 0.0) continue;
            for (int b = 0; a + b <= J; ++b)
                next[static_cast<std::size_t>(a + b)] +=
                    acc[static_cast<std::size_t>(a)] * hx[static_cast<std::size_t>(b)] * hz[static_cast<std::size_t>(b)];
        }
        acc.swap(next);
    }
    return acc;
}

/// phi_{2k}(x,z,s): the first k shells of the Mehler series at r = (1-s)/(1+s), on s in (1/2,1) only.
inline double mehler_partial(double s, const Point& x, const Point& z, int k) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("mehler_partial: s must lie in (0,1)");
    if (k < 1) throw PreconditionError("mehler_partial: k must be >= 1");
    if (s <= 0.5) return 0.0;
    const double r = (1.0 - s) / (1.0 + s);
    auto E = hermite_shell_products(x, z, k - 1);
    const double n = double(x.size());
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::pow(r, j + 0.5 * n) * E[static_cast<std::size_t>(j)];
    return sum;
}

/// e^{-tH}1(x) = (cosh 2t)^{-n/2} exp(-tanh(2t)|x|^2/2).
inline double heat_of_one(double t, const Point& x) {
    if (!(t > 0.0)) throw DomainError("heat_of_one: t must be positive");
    double x2 = 0.0;
    for (double v : x) x2 += v * v;
    return std::exp(-0.5 * double(x.size()) * detail::log_cosh(2.0 * t) - 0.5 * std::tanh(2.0 * t) * x2);
}

inline double heat_of_one_s(double s, const Point& x) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("heat_of_one_s: s must lie in (0,1)");
    double x2 = 0.0;
    for (double v : x) x2 += v * v;
    double q = 1.0 + s * s;
    return std::pow((1.0 - s) * (1.0 + s) / q, 0.5 * double(x.size())) * std::exp(-s * x2 / q);
}

inline SpectralCoeffs heat_apply(double t, const SpectralCoeffs& c) {
    if (!(t > 0.0)) throw DomainError("heat_apply: t must be positive");
    SpectralCoeffs r(c.dimension(), c.max_degree());
    const double n = double(c.dimension());
    for (const auto& [nu, v] : c.entries()) r.set(nu, v * std::exp(-t * (2.0 * nu.order() + n)));
    return r;
}

/// Grid route: trapezoid sums of G_t(x,.) u(.), one axis at a time (G_t factorizes over axes).
inline GridFunction heat_apply(double t, const GridFunction& u) {
    if (!(t > 0.0)) throw DomainError("heat_apply: t must be positive");
    const std::size_t m = u.per_axis(), n = u.dim();
    const double h = u.step();
    std::vector<double> K(m * m);
    const double pref = -0.5 * (std::log(2.0 * std::numbers::pi) + detail::log_sinh(2.0 * t));
    const double cth = 1.0 / std::tanh(2.0 * t), th = std::tanh(t);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double x = u.coord(i), z = u.coord(j);
            K[i * m + j] = h * std::exp(pref - (0.5 * (x - z) * (x - z) * cth + x * z * th));
        }
    std::vector<double> cur = u.values();
    std::size_t stride = 1;
    for (std::size_t d = n; d-- > 0;) {
        std::vector<double> next(cur.size(), 0.0);
        const std::size_t block = stride * m;
        for (std::size_t base = 0; base < cur.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off)
                for (std::size_t i = 0; i < m; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < m; ++j) s += K[i * m + j] * cur[base + j * stride + off];
                    next[base + i * stride + off] = s;
                }
        cur.swap(next);
        stride *= m;
    }
    GridFunction out(n, u.half_width(), h);
    out.values() = std::move(cur);
    return out;
}

}  // namespace hfrac
