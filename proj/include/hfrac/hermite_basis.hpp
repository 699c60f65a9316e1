#pragma once

// Hermite functions h_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) e^{-x^2/2}, their tensor
// products h_nu, Gauss-Hermite rules with the weight folded into the nodes, and
// analysis/synthesis between functions and truncated expansions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hfrac/errors.hpp"

namespace hfrac {

using Point = std::vector<double>;

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> comps) : comps_(std::move(comps)) {
        for (int c : comps_)
            if (c < 0) throw PreconditionError("MultiIndex: negative component");
        order_ = std::accumulate(comps_.begin(), comps_.end(), 0);
    }
    MultiIndex(std::initializer_list<int> comps) : MultiIndex(std::vector<int>(comps)) {}

    std::size_t dim() const { return comps_.size(); }
    int order() const { return order_; }
    int operator[](std::size_t i) const { return comps_[i]; }
    const std::vector<int>& components() const { return comps_; }

    /// nu + delta * e_axis; returns false (and leaves out untouched) if a component would go negative.
    bool shifted(std::size_t axis, int delta, MultiIndex& out) const {
        if (comps_[axis] + delta < 0) return false;
        auto c = comps_;
        c[axis] += delta;
        out = MultiIndex(std::move(c));
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < comps_.size(); ++i) s += (i ? "," : "") + std::to_string(comps_[i]);
        return s + ")";
    }

    // Graded order: total degree first, then lexicographic.
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        if (a.order_ != b.order_) return a.order_ < b.order_;
        return a.comps_ < b.comps_;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.comps_ == b.comps_; }

private:
    std::vector<int> comps_;
    int order_ = 0;
};

/// All multi-indices in dimension n with |nu| <= N, in graded order.
inline std::vector<MultiIndex> enumerate_indices(std::size_t n, int N) {
    std::vector<MultiIndex> out;
    std::vector<int> c(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t axis, int left) {
        if (axis + 1 == n) {
            for (int v = 0; v <= left; ++v) {
                c[axis] = v;
                out.emplace_back(c);
            }
            return;
        }
        for (int v = 0; v <= left; ++v) {
            c[axis] = v;
            rec(axis + 1, left - v);
        }
    };
    if (n == 0) return out;
    rec(0, N);
    std::sort(out.begin(), out.end());
    return out;
}

class SpectralCoeffs {
public:
    SpectralCoeffs() = default;
    SpectralCoeffs(std::size_t dimension, int max_degree) : dim_(dimension), max_degree_(max_degree) {
        require(dimension >= 1, "SpectralCoeffs: dimension must be >= 1");
        require(max_degree >= 0, "SpectralCoeffs: max_degree must be >= 0");
    }

    std::size_t dimension() const { return dim_; }
    int max_degree() const { return max_degree_; }
    const std::map<MultiIndex, double>& entries() const { return coeffs_; }

    double get(const MultiIndex& nu) const {
        auto it = coeffs_.find(nu);
        return it == coeffs_.end() ? 0.0 : it->second;
    }
    void set(const MultiIndex& nu, double v) {
        require_dim(nu.dim(), dim_, "SpectralCoeffs::set");
        if (nu.order() > max_degree_)
            throw PreconditionError("SpectralCoeffs::set: index " + nu.str() + " exceeds max_degree " +
                                    std::to_string(max_degree_));
        if (v == 0.0)
            coeffs_.erase(nu);
        else
            coeffs_[nu] = v;
    }
    void add(const MultiIndex& nu, double v) { set(nu, get(nu) + v); }

    SpectralCoeffs scaled(double a) const {
        SpectralCoeffs r(dim_, max_degree_);
        for (auto& [k, v] : coeffs_) r.set(k, a * v);
        return r;
    }
    SpectralCoeffs plus(const SpectralCoeffs& o) const {
        require_dim(o.dim_, dim_, "SpectralCoeffs::plus");
        SpectralCoeffs r(dim_, std::max(max_degree_, o.max_degree_));
        for (auto& [k, v] : coeffs_) r.add(k, v);
        for (auto& [k, v] : o.coeffs_) r.add(k, v);
        return r;
    }
    double max_abs_diff(const SpectralCoeffs& o) const {
        double m = 0;
        for (auto& [k, v] : coeffs_) m = std::max(m, std::abs(v - o.get(k)));
        for (auto& [k, v] : o.coeffs_) m = std::max(m, std::abs(v - get(k)));
        return m;
    }
    double dot(const SpectralCoeffs& o) const {
        double s = 0;
        for (auto& [k, v] : coeffs_) s += v * o.get(k);
        return s;
    }

private:
    std::size_t dim_ = 1;
    int max_degree_ = 0;
    std::map<MultiIndex, double> coeffs_;
};

namespace detail {
constexpr double kRescale = 1e150;
inline const double kLogRescale = std::log(kRescale);
}  // namespace detail

/// h_0..h_K at x, written to out (size K+1). The recurrence runs on an unnormalized
/// copy with a separately tracked log scale, so neither overflow nor the early
/// underflow of e^{-x^2/2} occurs for large x.
inline void hermite_table_1d(int K, double x, double* out) {
    if (K < 0) return;
    double log_scale = -0.5 * x * x;
    double a_prev = 0.0, a = std::pow(std::numbers::pi, -0.25);
    double factor = std::exp(log_scale);
    out[0] = a * factor;
    for (int k = 0; k < K; ++k) {
        double a_next = x * std::sqrt(2.0 / (k + 1)) * a - std::sqrt(double(k) / (k + 1)) * a_prev;
        a_prev = a;
        a = a_next;
        if (std::abs(a) > detail::kRescale) {
            a /= detail::kRescale;
            a_prev /= detail::kRescale;
            log_scale += detail::kLogRescale;
            factor = std::exp(log_scale);
        }
        out[k + 1] = a * factor;
    }
}

inline std::vector<double> hermite_table_1d(int K, double x) {
    std::vector<double> v(static_cast<std::size_t>(std::max(K, 0) + 1));
    hermite_table_1d(K, x, v.data());
    return v;
}

inline double hermite_eval_1d(int k, double x) {
    if (k < 0) throw PreconditionError("hermite_eval_1d: negative degree");
    std::vector<double> t(static_cast<std::size_t>(k) + 1);
    hermite_table_1d(k, x, t.data());
    return t[static_cast<std::size_t>(k)];
}

/// h_k'(x) = sqrt(k/2) h_{k-1}(x) - sqrt((k+1)/2) h_{k+1}(x).
inline double hermite_deriv_1d(int k, double x) {
    auto t = hermite_table_1d(k + 1, x);
    double d = -std::sqrt((k + 1) / 2.0) * t[static_cast<std::size_t>(k) + 1];
    if (k > 0) d += std::sqrt(k / 2.0) * t[static_cast<std::size_t>(k) - 1];
    return d;
}

inline double eval_multi(const MultiIndex& nu, const Point& x) {
    require_dim(x.size(), nu.dim(), "eval_multi");
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= hermite_eval_1d(nu[i], x[i]);
    return p;
}

/// Gauss-Hermite nodes x_i with weights w_i e^{x_i^2}, so that sum_i w_i f(x_i)
/// approximates the plain integral of f; exact for f = h_j h_k with j + k <= 2m - 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

constexpr int kMaxQuadratureNodes = 1024;

inline QuadratureRule quadrature_rule(int m) {
    if (m < 1) throw PreconditionError("quadrature_rule: m must be >= 1");
    if (m > kMaxQuadratureNodes)
        throw PreconditionError("quadrature_rule: m exceeds cap " + std::to_string(kMaxQuadratureNodes));
    QuadratureRule r;
    r.nodes.resize(static_cast<std::size_t>(m));
    r.weights.resize(static_cast<std::size_t>(m));
    // Newton on h_m with the classical asymptotic initial guesses, largest root first.
    // h_m / h_m' is scale invariant, so the unnormalized recurrence is enough here.
    auto ratio = [m](double x, double& hm1_out) {
        double a_prev = 0.0, a = 1.0;
        for (int k = 0; k < m; ++k) {
            double a_next = x * std::sqrt(2.0 / (k + 1)) * a - std::sqrt(double(k) / (k + 1)) * a_prev;
            a_prev = a;
            a = a_next;
            if (std::abs(a) > detail::kRescale) {
                a /= detail::kRescale;
                a_prev /= detail::kRescale;
            }
        }
        hm1_out = a_prev;
        double deriv = std::sqrt(2.0 * m) * a_prev - x * a;  // h_m' up to the common scale
        return a / deriv;
    };
    const int half = (m + 1) / 2;
    std::vector<double> roots(static_cast<std::size_t>(half));
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * m + 1) - 1.85575 * std::pow(2.0 * m + 1, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(double(m), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * roots[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * roots[1];
        else
            z = 2.0 * z - roots[static_cast<std::size_t>(i) - 2];
        if (m % 2 == 1 && i == half - 1) z = 0.0;
        for (int it = 0; it < 100; ++it) {
            double dummy;
            double step = ratio(z, dummy);
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        roots[static_cast<std::size_t>(i)] = z;
    }
    std::vector<double> tab(static_cast<std::size_t>(m));
    for (int i = 0; i < half; ++i) {
        double x = roots[static_cast<std::size_t>(i)];
        hermite_table_1d(m - 1, x, tab.data());
        double hm1 = tab[static_cast<std::size_t>(m) - 1];
        double w = 1.0 / (m * hm1 * hm1);
        std::size_t lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(m - 1 - i);
        r.nodes[lo] = -x;
        r.nodes[hi] = x;
        r.weights[lo] = w;
        r.weights[hi] = w;
    }
    if (m % 2 == 1) r.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
    return r;
}

/// <f, h_nu> for all |nu| <= N by tensor quadrature, contracted one axis at a time.
inline SpectralCoeffs expand(const std::function<double(const Point&)>& f, std::size_t n, int N,
                             const QuadratureRule& rule) {
    require(n >= 1 && n <= 3, "expand: dimension must be 1, 2 or 3");
    require(N >= 0, "expand: N must be >= 0");
    const std::size_t m = rule.size();
    const std::size_t K = static_cast<std::size_t>(N) + 1;
    // B[k][i] = w_i h_k(x_i)
    std::vector<double> B(K * m);
    {
        std::vector<double> tab(K);
        for (std::size_t i = 0; i < m; ++i) {
            hermite_table_1d(N, rule.nodes[i], tab.data());
            for (std::size_t k = 0; k < K; ++k) B[k * m + i] = rule.weights[i] * tab[k];
        }
    }
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= m;
    // Sample f on the tensor grid; the last axis runs fastest.
    std::vector<double> cur(total);
    Point p(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (std::size_t d = n; d-- > 0;) {
            p[d] = rule.nodes[r % m];
            r /= m;
        }
        cur[idx] = f(p);
    }
    // Contract axis 0 first: layout [k_0..k_{d-1}][i_d..i_{n-1}].
    std::size_t outer = 1;  // product of contracted extents
    std::size_t inner = total;
    for (std::size_t d = 0; d < n; ++d) {
        inner /= m;
        std::vector<double> next(outer * K * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < m; ++i) {
                const double* src = &cur[(o * m + i) * inner];
                for (std::size_t k = 0; k < K; ++k) {
                    double b = B[k * m + i];
                    if (b == 0.0) continue;
                    double* dst = &next[(o * K + k) * inner];
                    for (std::size_t j = 0; j < inner; ++j) dst[j] += b * src[j];
                }
            }
        cur.swap(next);
        outer *= K;
    }
    SpectralCoeffs c(n, N);
    for (const auto& nu : enumerate_indices(n, N)) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < n; ++d) flat = flat * K + static_cast<std::size_t>(nu[d]);
        c.set(nu, cur[flat]);
    }
    return c;
}

inline double synthesize(const SpectralCoeffs& c, const Point& x) {
    require_dim(x.size(), c.dimension(), "synthesize");
    const int N = c.max_degree();
    std::vector<std::vector<double>> tabs(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) tabs[d] = hermite_table_1d(N, x[d]);
    double s = 0.0;
    for (const auto& [nu, v] : c.entries()) {
        double p = v;
        for (std::size_t d = 0; d < x.size(); ++d) p *= tabs[d][static_cast<std::size_t>(nu[d])];
        s += p;
    }
    return s;
}

/// Value and gradient of the synthesized expansion at x.
inline double synthesize_with_gradient(const SpectralCoeffs& c, const Point& x, Point& grad) {
    require_dim(x.size(), c.dimension(), "synthesize_with_gradient");
    const int N = c.max_degree();
    const std::size_t n = x.size();
    std::vector<std::vector<double>> tabs(n), dtabs(n);
    for (std::size_t d = 0; d < n; ++d) {
        tabs[d] = hermite_table_1d(N + 1, x[d]);
        dtabs[d].resize(static_cast<std::size_t>(N) + 1);
        for (int k = 0; k <= N; ++k) {
            double v = -std::sqrt((k + 1) / 2.0) * tabs[d][static_cast<std::size_t>(k) + 1];
            if (k > 0) v += std::sqrt(k / 2.0) * tabs[d][static_cast<std::size_t>(k) - 1];
            dtabs[d][static_cast<std::size_t>(k)] = v;
        }
    }
    grad.assign(n, 0.0);
    double s = 0.0;
    for (const auto& [nu, v] : c.entries()) {
        double p = v;
        for (std::size_t d = 0; d < n; ++d) p *= tabs[d][static_cast<std::size_t>(nu[d])];
        s += p;
        for (std::size_t g = 0; g < n; ++g) {
            double q = v;
            for (std::size_t d = 0; d < n; ++d) {
                auto k = static_cast<std::size_t>(nu[d]);
                q *= (d == g) ? dtabs[d][k] : tabs[d][k];
            }
            grad[g] += q;
        }
    }
    return s;
}

}  // namespace hfrac
