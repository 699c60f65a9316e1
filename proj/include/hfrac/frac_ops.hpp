#pragma once

// Fractional powers of H = -Delta + |x|^2: spectral multipliers, and the kernels
// F and boundary functions B that represent them pointwise through the
// subordinated heat semigroup in the s = tanh(t) parametrization.

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/heat_semigroup.hpp"
#include "hfrac/hermite_basis.hpp"
#include "hfrac/quadrature.hpp"

namespace hfrac {

// ---------------------------------------------------------------- multipliers

/// (H + shift)^sigma on coefficients; shift is 0, +2k or -2k.
struct MultiplierSpec {
    double sigma = 0.0;
    int shift = 0;
};

inline SpectralCoeffs project_Sk(const SpectralCoeffs& c, int k) {
    require(k >= 0, "project_Sk: k must be >= 0");
    SpectralCoeffs r(c.dimension(), c.max_degree());
    for (const auto& [nu, v] : c.entries())
        if (nu.order() >= k) r.set(nu, v);
    return r;
}

inline SpectralCoeffs multiplier_apply(const MultiplierSpec& spec, const SpectralCoeffs& c) {
    require(spec.shift % 2 == 0, "multiplier_apply: shift must be even");
    const double n = double(c.dimension());
    SpectralCoeffs r(c.dimension(), c.max_degree());
    const int k = spec.shift < 0 ? -spec.shift / 2 : 0;
    for (const auto& [nu, v] : c.entries()) {
        if (spec.shift < 0 && nu.order() < k)
            throw PreconditionError("multiplier_apply: coefficient at nu=" + nu.str() +
                                    " violates the S_k condition for k=" + std::to_string(k));
        double lambda = 2.0 * nu.order() + n + spec.shift;
        if (spec.sigma == 0.0) {
            r.set(nu, v);
            continue;
        }
        if (!(lambda > 0.0))
            throw PreconditionError("multiplier_apply: non-positive eigenvalue at nu=" + nu.str());
        r.set(nu, v * std::pow(lambda, spec.sigma));
    }
    return r;
}

// ---------------------------------------------------------------- kernels

enum class KernelKind {
    FracPower,         // F_sigma
    ShiftPlus,         // F_{2k,sigma}
    ShiftMinus,        // F_{-2k,sigma}
    FracIntegral,      // F_{-sigma}
    ShiftPlusIntegral  // F_{2k,-sigma}, kernel of (H+2k)^{-sigma}
};

inline std::string kernel_kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::FracPower: return "F_sigma";
        case KernelKind::ShiftPlus: return "F_2k_sigma";
        case KernelKind::ShiftMinus: return "F_minus2k_sigma";
        case KernelKind::FracIntegral: return "F_minus_sigma";
        case KernelKind::ShiftPlusIntegral: return "F_2k_minus_sigma";
    }
    return "?";
}

struct KernelSpec {
    KernelKind kind = KernelKind::FracPower;
    double sigma = 0.5;
    int k = 0;
    std::size_t dim = 1;
    QuadratureSpec quad{};

    void validate() const {
        require(dim >= 1 && dim <= 3, "KernelSpec: dimension must be 1, 2 or 3");
        const bool shifted = kind == KernelKind::ShiftPlus || kind == KernelKind::ShiftMinus ||
                             kind == KernelKind::ShiftPlusIntegral;
        if (shifted)
            require(k >= 1, "KernelSpec: shifted kinds need k >= 1");
        else
            require(k == 0, "KernelSpec: k must be 0 for unshifted kinds");
        if (kind == KernelKind::FracIntegral || kind == KernelKind::ShiftPlusIntegral)
            require(sigma > 0.0 && sigma <= 1.0, "KernelSpec: fractional integrals need 0 < sigma <= 1");
        else
            require(sigma > 0.0 && sigma < 1.0, "KernelSpec: fractional powers need 0 < sigma < 1");
        quad.validate();
    }
    bool is_integral() const { return kind == KernelKind::FracIntegral || kind == KernelKind::ShiftPlusIntegral; }
    /// Exponent rho of the measure d mu_rho.
    double rho() const { return is_integral() ? -sigma : sigma; }
    /// Positive normalizing factor in front of the s-integral.
    double kappa() const { return is_integral() ? 1.0 / std::tgamma(sigma) : sigma / std::tgamma(1.0 - sigma); }
};

/// Sums  sum_nodes W s^p exp(-(s a + b/s)/4)  for p = -2..2.
struct KernelMoments {
    std::array<double, 5> m{};
    double operator()(int p) const { return m[static_cast<std::size_t>(p + 2)]; }
};

namespace detail {
inline double ints_of_hermite(int m) {
    // int h_m = 0 for odd m; I_0 = sqrt(2) pi^{1/4}, I_{m} = sqrt((m-1)/m) I_{m-2}.
    if (m % 2) return 0.0;
    double I = std::sqrt(2.0) * std::pow(std::numbers::pi, 0.25);
    for (int j = 2; j <= m; j += 2) I *= std::sqrt((j - 1.0) / j);
    return I;
}
}  // namespace detail

/// Precomputed node table for one kernel: value and analytic x-derivatives.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const KernelSpec& ks) : ks_(ks) {
        ks.validate();
        SMeasureRule rule(ks.rho(), ks.quad);
        const double n = double(ks.dim), kappa = ks.kappa();
        const double weight_k = ks.kind == KernelKind::ShiftMinus ? -double(ks.k) : double(ks.k);
        for (const auto& nd : rule.lower()) {
            double s = nd.s;
            double logc = 0.5 * n * (std::log1p(-s * s) - std::log(4.0 * std::numbers::pi * s));
            double logw = weight_k * (std::log1p(-s) - std::log1p(s));
            lower_.push_back({s, nd.inv_s, nd.w * kappa * std::exp(logc + logw)});
        }
        series_ = ks.kind == KernelKind::ShiftMinus;
        for (const auto& nd : rule.upper()) {
            double t = nd.t;
            if (series_) {
                // On (1/2,1) the kernel is r^{-k}(G - phi_2k) = sum_{j>=k} r^{j-k+n/2} E_j, r = e^{-2t}.
                upper_.push_back({std::exp(-2.0 * t), 0.0, nd.w * kappa});
            } else {
                double logc = -0.5 * n * (std::log(2.0 * std::numbers::pi) + detail::log_sinh(2.0 * t));
                upper_.push_back({nd.s, nd.inv_s, nd.w * kappa * std::exp(logc - 2.0 * weight_k * t)});
            }
        }
        q_ = 0.5 * n + 1.0 + ks.rho();
        if (ks.is_integral() && n < 2.0 * ks.sigma) {
            // Diagonal values are finite: keep the endpoint cell of the lower region.
            diag_beta_ = ks.sigma - 0.5 * n;
            diag_rule_ = std::make_shared<SMeasureRule>(rule);
        }
    }

    const KernelSpec& spec() const { return ks_; }

    /// Kernel value from a = |x+z|^2, b = |x-z|^2 (series kinds need the points themselves).
    double value(const Point& x, const Point& z) const {
        require_dim(x.size(), ks_.dim, "kernel_eval");
        require_dim(z.size(), ks_.dim, "kernel_eval");
        double a, b, dot;
        detail::sq_sum_diff(x, z, a, b, dot);
        if (b == 0.0) return diagonal(a);
        double sum = lower_sum(a, b);
        if (!series_) {
            for (const auto& nd : upper_) sum += nd.W * std::exp(-0.25 * (nd.s * a + b * nd.inv_s));
            return sum;
        }
        const int J = ks_.k + kSeriesTerms;
        auto E = hermite_shell_products(x, z, J);
        const double half_n = 0.5 * double(ks_.dim);
        for (const auto& nd : upper_) {
            double r = nd.s, acc = 0.0, rp = std::pow(r, half_n);
            for (int j = ks_.k; j <= J; ++j) {
                acc += rp * E[static_cast<std::size_t>(j)];
                rp *= r;
            }
            sum += nd.W * acc;
        }
        return sum;
    }

    KernelMoments moments(const Point& x, const Point& z) const {
        require(!series_, "KernelEvaluator::moments: not available for F_{-2k,sigma}");
        double a, b, dot;
        detail::sq_sum_diff(x, z, a, b, dot);
        if (b == 0.0) throw DomainError("kernel derivatives are singular on the diagonal");
        KernelMoments M;
        auto acc = [&](const Node& nd) {
            double e = nd.W * std::exp(-0.25 * (nd.s * a + b * nd.inv_s));
            double is = nd.inv_s;
            M.m[0] += e * is * is;
            M.m[1] += e * is;
            M.m[2] += e;
            M.m[3] += e * nd.s;
            M.m[4] += e * nd.s * nd.s;
        };
        const double cut = s_cut(a, b);
        for (const auto& nd : upper_) acc(nd);
        for (const auto& nd : lower_) {
            if (nd.s < cut) break;
            acc(nd);
        }
        return M;
    }

    /// d/dx_i of the kernel (x is the first argument).
    double dx(std::size_t i, const Point& x, const Point& z) const {
        auto M = moments(x, z);
        return -0.5 * (x[i] + z[i]) * M(1) - 0.5 * (x[i] - z[i]) * M(-1);
    }

    /// A_{eps i} acting on the first argument: (eps d_i + x_i) K.
    double ladder(int signed_i, const Point& x, const Point& z) const {
        auto M = moments(x, z);
        return ladder_from(M, signed_i, x, z);
    }

    /// A_{eps i} A_{eta j} acting on the first argument.
    double ladder2(int signed_i, int signed_j, const Point& x, const Point& z) const {
        auto M = moments(x, z);
        return ladder2_from(M, signed_i, signed_j, x, z);
    }

    static double ladder_from(const KernelMoments& M, int signed_i, const Point& x, const Point& z) {
        const std::size_t i = static_cast<std::size_t>(std::abs(signed_i) - 1);
        const double eps = signed_i > 0 ? 1.0 : -1.0;
        double d = -0.5 * (x[i] + z[i]) * M(1) - 0.5 * (x[i] - z[i]) * M(-1);
        return eps * d + x[i] * M(0);
    }

    static double d2_from(const KernelMoments& M, std::size_t i, std::size_t j, const Point& x, const Point& z) {
        double Ai = x[i] + z[i], Aj = x[j] + z[j], Bi = x[i] - z[i], Bj = x[j] - z[j];
        double v = 0.25 * Ai * Aj * M(2) + 0.25 * (Ai * Bj + Bi * Aj) * M(0) + 0.25 * Bi * Bj * M(-2);
        if (i == j) v -= 0.5 * (M(1) + M(-1));
        return v;
    }

    static double ladder2_from(const KernelMoments& M, int signed_i, int signed_j, const Point& x, const Point& z) {
        const std::size_t i = static_cast<std::size_t>(std::abs(signed_i) - 1);
        const std::size_t j = static_cast<std::size_t>(std::abs(signed_j) - 1);
        const double eps = signed_i > 0 ? 1.0 : -1.0, eta = signed_j > 0 ? 1.0 : -1.0;
        auto di = [&](std::size_t a) { return -0.5 * (x[a] + z[a]) * M(1) - 0.5 * (x[a] - z[a]) * M(-1); };
        double v = eps * eta * d2_from(M, i, j, x, z) + eps * x[j] * di(i) + eta * x[i] * di(j) + x[i] * x[j] * M(0);
        if (i == j) v += eps * M(0);
        return v;
    }

private:
    struct Node {
        double s, inv_s, W;
    };
    static constexpr int kSeriesTerms = 44;

    double s_cut(double a, double b) const {
        // Smallest useful s: beyond it exp(-b/(4s)) is negligible against the peak of the integrand.
        double sa = std::sqrt(a * b);
        double emin = (b <= a) ? 0.5 * sa : 0.25 * (a + b);
        return b / (4.0 * (emin + 60.0 + 4.0 * q_));
    }

    double lower_sum(double a, double b) const {
        const double cut = s_cut(a, b);
        double sum = 0.0;
        for (const auto& nd : lower_) {
            if (nd.s < cut) break;
            sum += nd.W * std::exp(-0.25 * (nd.s * a + b * nd.inv_s));
        }
        return sum;
    }

    double diagonal(double a) const {
        if (!diag_rule_)
            throw DomainError("kernel_eval: " + kernel_kind_name(ks_.kind) + " is singular on the diagonal");
        double sum = 0.0;
        for (const auto& nd : lower_) sum += nd.W * std::exp(-0.25 * nd.s * a);
        for (const auto& nd : upper_) sum += nd.W * std::exp(-0.25 * nd.s * a);
        const double n = double(ks_.dim), kappa = ks_.kappa();
        sum += diag_rule_->endpoint_cell(
            [&](const SNode& nd) {
                double s = nd.s;
                return kappa * std::pow((1.0 - s * s) / (4.0 * std::numbers::pi * s), 0.5 * n) *
                       std::exp(-0.25 * s * a);
            },
            diag_beta_);
        return sum;
    }

    KernelSpec ks_;
    std::vector<Node> lower_, upper_;
    bool series_ = false;
    double q_ = 0.0;
    double diag_beta_ = 0.0;
    std::shared_ptr<SMeasureRule> diag_rule_;
};

namespace detail {
inline bool same_quad(const QuadratureSpec& a, const QuadratureSpec& b) {
    return a.panels == b.panels && a.grade_zero == b.grade_zero && a.grade_one == b.grade_one &&
           a.gl_order == b.gl_order && a.octaves == b.octaves && a.t_max == b.t_max;
}
inline bool same_kernel(const KernelSpec& a, const KernelSpec& b) {
    return a.kind == b.kind && a.sigma == b.sigma && a.k == b.k && a.dim == b.dim && same_quad(a.quad, b.quad);
}
inline const KernelEvaluator& cached_kernel(const KernelSpec& ks) {
    thread_local std::unique_ptr<KernelEvaluator> cache;
    if (!cache || !same_kernel(cache->spec(), ks)) cache = std::make_unique<KernelEvaluator>(ks);
    return *cache;
}
}  // namespace detail

inline double kernel_eval(const KernelSpec& ks, const Point& x, const Point& z) {
    return detail::cached_kernel(ks).value(x, z);
}

// ---------------------------------------------------------------- boundary terms

enum class BoundaryKind {
    Frac,          // B_sigma
    ShiftPlus,     // B_{2k,sigma}
    ShiftMinus,    // B_{-2k,sigma}
    IntegralOfOne  // H^{-sigma} 1, or (H+2k)^{-sigma} 1 when k > 0
};

inline std::string boundary_kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Frac: return "B_sigma";
        case BoundaryKind::ShiftPlus: return "B_2k_sigma";
        case BoundaryKind::ShiftMinus: return "B_minus2k_sigma";
        case BoundaryKind::IntegralOfOne: return "H_minus_sigma_1";
    }
    return "?";
}

struct BoundaryParams {
    double sigma = 0.5;
    int k = 0;
    std::size_t dim = 1;
    QuadratureSpec quad{};
};

/// Value, gradient and Hessian of a boundary function at one point.
struct BoundaryJet {
    double value = 0.0;
    Point grad;
    std::vector<double> hess;  // row-major n x n
};

class BoundaryEvaluator {
public:
    BoundaryEvaluator(BoundaryKind kind, const BoundaryParams& p)
        : kind_(kind), p_(p), rule_(kind == BoundaryKind::IntegralOfOne ? -p.sigma : p.sigma, p.quad) {
        require(p.dim >= 1 && p.dim <= 3, "boundary_term_eval: dimension must be 1, 2 or 3");
        if (kind == BoundaryKind::IntegralOfOne)
            require(p.sigma > 0 && p.sigma <= 1, "boundary_term_eval: H^{-sigma}1 needs 0 < sigma <= 1");
        else
            require(p.sigma > 0 && p.sigma < 1, "boundary_term_eval: B-kinds need 0 < sigma < 1");
        if (kind == BoundaryKind::ShiftPlus || kind == BoundaryKind::ShiftMinus)
            require(p.k >= 1, "boundary_term_eval: shifted kinds need k >= 1");
        else if (kind == BoundaryKind::Frac)
            require(p.k == 0, "boundary_term_eval: k must be 0 for B_sigma");
        else
            require(p.k >= 0, "boundary_term_eval: k must be >= 0");
        // 1/Gamma(-sigma) = -sigma/Gamma(1-sigma); 1/Gamma(sigma) for the integral of one.
        pref_ = kind == BoundaryKind::IntegralOfOne ? 1.0 / std::tgamma(p.sigma) : -p.sigma / std::tgamma(1.0 - p.sigma);
    }

    BoundaryKind kind() const { return kind_; }
    const BoundaryParams& params() const { return p_; }

    double value(const Point& x) const { return jet(x, 0).value; }
    Point gradient(const Point& x) const { return jet(x, 1).grad; }

    /// order 0: value; 1: + gradient; 2: + Hessian (not for B_{-2k,sigma}).
    BoundaryJet jet(const Point& x, int order) const {
        require_dim(x.size(), p_.dim, "boundary_term_eval");
        require(!(order >= 2 && kind_ == BoundaryKind::ShiftMinus), "boundary_term_eval: no Hessian for B_{-2k}");
        const std::size_t n = p_.dim;
        const double nd = double(n);
        double x2 = 0.0;
        for (double v : x) x2 += v * v;
        const bool minus_one = kind_ != BoundaryKind::IntegralOfOne;
        // IntegralOfOne with k > 0 is (H+2k)^{-sigma} 1.
        const double kw = kind_ == BoundaryKind::ShiftMinus ? -double(p_.k) : double(p_.k);

        // Accumulate sum w [bracket], sum w val tau, sum w val tau^2 where val = e^{-tH}1 times the shift
        // weight and tau = s/(1+s^2) = tanh(2t)/2; derivatives are polynomial in x times these.
        double v0 = 0.0, v1 = 0.0, v2 = 0.0;
        for (const auto& node : rule_.lower()) {
            double s = node.s, q = 1.0 + s * s, tau = s / q;
            double L = 0.5 * nd * (std::log1p(-s * s) - std::log1p(s * s)) - s * x2 / q +
                       kw * (std::log1p(-s) - std::log1p(s));
            double br = minus_one ? std::expm1(L) : std::exp(L);
            v0 += node.w * br;
            if (order >= 1) {
                double val = std::exp(L);
                v1 += node.w * val * tau;
                v2 += node.w * val * tau * tau;
            }
        }
        // Endpoint cell at s -> 0.
        {
            double beta = minus_one ? 1.0 - p_.sigma : p_.sigma;
            v0 += rule_.endpoint_cell(
                [&](const SNode& node) {
                    double s = node.s, q = 1.0 + s * s;
                    double L = 0.5 * nd * (std::log1p(-s * s) - std::log1p(s * s)) - s * x2 / q +
                               kw * (std::log1p(-s) - std::log1p(s));
                    return minus_one ? std::expm1(L) : std::exp(L);
                },
                beta);
        }
        // Upper region in t; the constant -1 is integrated exactly.
        Point gradP(n, 0.0);
        std::vector<double> P, dP;  // shell sums for B_{-2k,sigma}
        if (kind_ == BoundaryKind::ShiftMinus) shell_integrals(x, order >= 1, P, dP);
        for (const auto& node : rule_.upper()) {
            double t = node.t;
            if (kind_ == BoundaryKind::ShiftMinus) {
                double r = std::exp(-2.0 * t), rp = std::pow(r, 0.5 * nd), acc = 0.0;
                std::vector<double> gacc(n, 0.0);
                for (int j = p_.k; j < static_cast<int>(P.size()); ++j) {
                    acc += rp * P[static_cast<std::size_t>(j)];
                    if (order >= 1)
                        for (std::size_t d = 0; d < n; ++d) gacc[d] += rp * dP[static_cast<std::size_t>(j) * n + d];
                    rp *= r;
                }
                v0 += node.w * acc;
                for (std::size_t d = 0; d < n; ++d) gradP[d] += node.w * gacc[d];
                continue;
            }
            double tau = 0.5 * std::tanh(2.0 * t);
            double val = std::exp(-0.5 * nd * detail::log_cosh(2.0 * t) - tau * x2 - 2.0 * kw * t);
            v0 += node.w * val;
            v1 += node.w * val * tau;
            v2 += node.w * val * tau * tau;
        }
        if (minus_one) {
            double th = rule_.t_half();
            v0 -= std::pow(th, -p_.sigma) / p_.sigma;
        }
        BoundaryJet J;
        J.value = pref_ * v0;
        if (order >= 1) {
            J.grad.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) J.grad[i] = pref_ * (-2.0 * x[i] * v1 + gradP[i]);
        }
        if (order >= 2) {
            J.hess.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    J.hess[i * n + j] = pref_ * (4.0 * x[i] * x[j] * v2 - (i == j ? 2.0 * v1 : 0.0));
        }
        return J;
    }

private:
    // P_j(x) = sum_{|nu|=j} h_nu(x) int h_nu, and its gradient, for j < k + terms.
    void shell_integrals(const Point& x, bool grad, std::vector<double>& P, std::vector<double>& dP) const {
        const std::size_t n = p_.dim;
        const int J = p_.k + 44;
        const auto Jz = static_cast<std::size_t>(J) + 1;
        std::vector<std::vector<double>> f(n), df(n);
        for (std::size_t d = 0; d < n; ++d) {
            auto h = hermite_table_1d(J + 1, x[d]);
            f[d].resize(Jz);
            df[d].resize(Jz);
            for (int m = 0; m <= J; ++m) {
                double I = detail::ints_of_hermite(m);
                auto mm = static_cast<std::size_t>(m);
                f[d][mm] = h[mm] * I;
                double der = -std::sqrt((m + 1) / 2.0) * h[mm + 1];
                if (m > 0) der += std::sqrt(m / 2.0) * h[mm - 1];
                df[d][mm] = der * I;
            }
        }
        auto convolve = [&](std::size_t deriv_axis) {
            std::vector<double> acc(Jz, 0.0);
            acc[0] = 1.0;
            for (std::size_t d = 0; d < n; ++d) {
                const auto& g = (d == deriv_axis) ? df[d] : f[d];
                std::vector<double> next(Jz, 0.0);
                for (std::size_t a = 0; a < Jz; ++a) {
                    if (acc[a] == 0.0) continue;
                    for (std::size_t b = 0; a + b < Jz; ++b) next[a + b] += acc[a] * g[b];
                }
                acc.swap(next);
            }
            return acc;
        };
        P = convolve(n);
        if (grad) {
            dP.assign(Jz * n, 0.0);
            for (std::size_t d = 0; d < n; ++d) {
                auto g = convolve(d);
                for (std::size_t j = 0; j < Jz; ++j) dP[j * n + d] = g[j];
            }
        }
    }

    BoundaryKind kind_;
    BoundaryParams p_;
    SMeasureRule rule_;
    double pref_ = 1.0;
};

inline double boundary_term_eval(BoundaryKind kind, const BoundaryParams& params, const Point& x) {
    return BoundaryEvaluator(kind, params).value(x);
}

}  // namespace hfrac
