#pragma once

// Verification campaigns: fitted constants for the kernel bounds, shell cancellation,
// L1 row bounds, the mollifier utility, Schauder norm ratios and the PV shell exponent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hfrac/derivatives_riesz.hpp"
#include "hfrac/errors.hpp"
#include "hfrac/frac_ops.hpp"
#include "hfrac/heat_semigroup.hpp"
#include "hfrac/hermite_basis.hpp"
#include "hfrac/holder_spaces.hpp"
#include "hfrac/parallel.hpp"
#include "hfrac/pointwise.hpp"
#include "hfrac/quadrature.hpp"
#include "hfrac/test_functions.hpp"

namespace hfrac {

constexpr std::uint64_t kDefaultSeed = 20240611;

/// mt19937_64 with portable real draws (the standard distributions are implementation defined).
class LabRng {
public:
    explicit LabRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double log_uniform(double a, double b) { return a * std::exp(std::log(b / a) * uniform()); }
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    Point direction(std::size_t n) {
        if (n == 1) return {uniform() < 0.5 ? -1.0 : 1.0};
        Point e(n);
        double r2 = 0;
        do {
            r2 = 0;
            for (auto& c : e) {
                c = normal();
                r2 += c * c;
            }
        } while (r2 < 1e-24);
        for (auto& c : e) c /= std::sqrt(r2);
        return e;
    }
    Point box(std::size_t n, double X) {
        Point p(n);
        for (auto& c : p) c = uniform(-X, X);
        return p;
    }
    /// Even mixture of log-uniform and uniform on [a, b]: small scales and the bulk both get mass.
    double mixed(double a, double b) { return uniform() < 0.5 ? log_uniform(a, b) : uniform(a, b); }
    /// |x| from mixed(r0, X), uniform direction.
    Point scaled(std::size_t n, double X, double r0 = 1e-3) {
        Point e = direction(n);
        double r = mixed(r0, X);
        for (auto& c : e) c *= r;
        return e;
    }
    /// s in (0,1): half the mass log-uniform towards 0, half with 1 - s log-uniform towards 1.
    double s_mixture() {
        return uniform() < 0.5 ? log_uniform(1e-4, 1.0) : 1.0 - log_uniform(1e-6, 0.5);
    }

private:
    std::mt19937_64 eng_;
};

inline double norm_of(const Point& x) {
    double s = 0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}
inline double dist(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}
inline Point along(const Point& x, double r, const Point& e) {
    Point z = x;
    for (std::size_t i = 0; i < x.size(); ++i) z[i] += r * e[i];
    return z;
}

// ---------------------------------------------------------------------------------------------
// Bound forms and the fitting engine

/// One sampled configuration; unused fields stay empty or zero.
struct Sample {
    Point x, z, x2;
    double s = 0.0, r1 = 0.0, r2 = 0.0;
};

struct BoundForm {
    std::string lemma;    // campaign id, 5.1 .. 5.10
    std::string name;     // short unique name
    std::string display;  // the inequality being checked
    std::size_t dim = 1;
    bool log_domain = false;  // quantity and comparator return logarithms
    bool fit_exp = false;     // comparator has an exponential constant c to fit
    std::size_t group = 1;    // samples drawn and evaluated in blocks of this size
    bool polish = true;       // refine the best samples by compass search (pointwise forms only)
    std::function<std::vector<Sample>(LabRng&)> draw;                         // returns `group` samples
    std::function<void(const std::vector<Sample>&, std::vector<double>&)> quantity;  // signed values
    std::function<double(const Sample&, double c)> comparator;
    std::function<bool(const Sample&)> valid;  // optional constraint on refined samples
};

struct SamplerSpec {
    std::size_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t coarse = 2000;
    std::size_t polish = 64;  // best samples per half handed to the compass search
    unsigned threads = 0;
};

struct BoundFitReport {
    std::string lemma, name, display;
    std::size_t dim = 1;
    double constant = 0.0;          // C* over the base sample
    double constant_doubled = 0.0;  // C* over the doubled (superset) sample
    double stability = std::numeric_limits<double>::quiet_NaN();
    bool stability_evaluated = false;
    bool finite = true;
    bool pass = false;
    std::size_t samples = 0;
    std::size_t evaluated = 0;
    std::size_t rejected = 0;
    std::vector<std::string> rejections;
    Sample argmax;
    double argmax_quantity = 0.0, argmax_comparator = 0.0;
    double min_quantity = std::numeric_limits<double>::infinity();
    bool exp_fitted = false;
    bool exp_fit_settled = false;  // C*(c) reached its plateau below the top rung
    double exp_constant = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> exp_ladder;  // (c, coarse C*)
    std::size_t polished = 0;  // refined samples that improved on their start
    std::uint64_t seed = 0;
};

inline constexpr double kExpLadder[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
inline constexpr double kStabilityLimit = 1.10;
inline constexpr double kExpPlateau = 1.25;

namespace detail {

inline std::vector<Sample> draw_samples(const BoundForm& f, LabRng& rng, std::size_t count) {
    std::vector<Sample> out;
    out.reserve(count);
    while (out.size() < count) {
        auto g = f.draw(rng);
        require(g.size() == f.group, "BoundForm: sampler returned a wrong group size");
        for (auto& s : g) out.push_back(std::move(s));
    }
    out.resize(count);
    return out;
}

inline std::vector<double> eval_quantities(const BoundForm& f, const std::vector<Sample>& all, unsigned threads) {
    const std::size_t G = f.group, blocks = (all.size() + G - 1) / G;
    std::vector<double> q(all.size());
    parallel_for(
        blocks,
        [&](std::size_t b) {
            std::vector<Sample> blk(all.begin() + b * G, all.begin() + std::min(all.size(), (b + 1) * G));
            std::vector<double> out;
            f.quantity(blk, out);
            for (std::size_t i = 0; i < blk.size(); ++i) q[b * G + i] = out[i];
        },
        threads);
    return q;
}

struct RatioScan {
    double best = 0.0;
    std::size_t arg = 0;
    bool any = false;
};

inline double ratio_of(const BoundForm& f, double q, const Sample& s, double c, bool& ok) {
    double comp = f.comparator(s, c);
    if (f.log_domain) {
        ok = std::isfinite(comp) && !std::isnan(q);
        return ok ? std::exp(q - comp) : 0.0;
    }
    ok = std::isfinite(comp) && comp > 0.0 && std::isfinite(q);
    return ok ? std::abs(q) / comp : 0.0;
}

inline RatioScan scan(const BoundForm& f, const std::vector<Sample>& S, const std::vector<double>& q, std::size_t n,
                      double c) {
    RatioScan r;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = false;
        double v = ratio_of(f, q[i], S[i], c, ok);
        if (ok && (!r.any || v > r.best)) {
            r.best = v;
            r.arg = i;
            r.any = true;
        }
    }
    return r;
}

// Coordinates of a sample: x, z, x2 and logit(s) when s is used.
inline std::vector<double> to_coords(const Sample& s) {
    std::vector<double> v(s.x.begin(), s.x.end());
    v.insert(v.end(), s.z.begin(), s.z.end());
    v.insert(v.end(), s.x2.begin(), s.x2.end());
    if (s.s > 0) v.push_back(std::log(s.s / (1 - s.s)));
    return v;
}

inline Sample from_coords(const Sample& shape, const std::vector<double>& v) {
    Sample s = shape;
    std::size_t k = 0;
    for (auto& c : s.x) c = v[k++];
    for (auto& c : s.z) c = v[k++];
    for (auto& c : s.x2) c = v[k++];
    if (shape.s > 0) s.s = 1.0 / (1.0 + std::exp(-v[k]));
    return s;
}

// Natural length of a sample: |x-x2| for smoothness samples, |x-z| for pairs, |x| for points.
inline double sample_scale(const Sample& s) {
    double l = !s.x2.empty() ? dist(s.x, s.x2) : (!s.z.empty() ? dist(s.x, s.z) : norm_of(s.x));
    return std::max(l, 1e-6);
}

struct Polished {
    Sample s;
    double ratio = 0, q = 0;
    bool improved = false;
};

// Deterministic compass search on the ratio, starting from one sample.
inline Polished compass(const BoundForm& f, const Sample& start, double q0, double c) {
    Polished best{start, 0.0, q0, false};
    bool ok = false;
    best.ratio = ratio_of(f, q0, start, c, ok);
    if (!ok) return best;
    auto v = to_coords(start);
    const std::size_t nx = start.x.size() + start.z.size() + start.x2.size();
    double h = 0.25 * sample_scale(start), hs = 0.5;
    const double h_min = 1e-4 * h;
    std::vector<Sample> one(1);
    std::vector<double> qo;
    for (int sweep = 0; sweep < 200 && h > h_min; ++sweep) {
        bool moved = false;
        for (std::size_t k = 0; k < v.size(); ++k)
            for (double sg : {1.0, -1.0}) {
                auto w = v;
                w[k] += sg * (k < nx ? h : hs);
                Sample t = from_coords(start, w);
                if (f.valid && !f.valid(t)) continue;
                one[0] = t;
                f.quantity(one, qo);
                bool tok = false;
                double r = ratio_of(f, qo[0], t, c, tok);
                if (tok && r > best.ratio) {
                    best = {t, r, qo[0], true};
                    v = w;
                    moved = true;
                    break;  // next coordinate
                }
            }
        if (!moved) {
            h *= 0.5;
            hs *= 0.5;
        }
    }
    return best;
}

// Best ratio over the first n samples after refining the top `keep` of them.
inline Polished polish_best(const BoundForm& f, const std::vector<Sample>& S, const std::vector<double>& q,
                            std::size_t n, double c, std::size_t keep, unsigned threads, std::size_t& improved) {
    std::vector<std::pair<double, std::size_t>> rank;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = false;
        double r = ratio_of(f, q[i], S[i], c, ok);
        if (ok) rank.push_back({r, i});
    }
    std::sort(rank.begin(), rank.end(), [](auto& a, auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    rank.resize(std::min(rank.size(), keep));
    std::vector<Polished> out(rank.size());
    parallel_for(rank.size(), [&](std::size_t k) { out[k] = compass(f, S[rank[k].second], q[rank[k].second], c); },
                 threads);
    Polished best;
    for (const auto& p : out) {
        improved += p.improved ? 1 : 0;
        if (p.ratio > best.ratio) best = p;
    }
    return best;
}

}  // namespace detail

/// C* = max |quantity| / comparator. The exponential constant, if any, is fixed first on a coarse
/// independent sample and then frozen.
inline BoundFitReport fit_bound_constant(const BoundForm& f, const SamplerSpec& sp = {}) {
    require(sp.samples >= 1, "fit_bound_constant: need at least one sample");
    BoundFitReport rep;
    rep.lemma = f.lemma;
    rep.name = f.name;
    rep.display = f.display;
    rep.dim = f.dim;
    rep.samples = sp.samples;
    rep.seed = sp.seed;

    double c = 1.0;
    if (f.fit_exp) {
        rep.exp_fitted = true;
        LabRng crng(sp.seed ^ 0x9E3779B97F4A7C15ULL);
        const std::size_t nc = std::max<std::size_t>(f.group, std::min(sp.coarse, sp.samples));
        auto S = detail::draw_samples(f, crng, nc);
        auto q = detail::eval_quantities(f, S, sp.threads);
        const std::size_t L = std::size(kExpLadder);
        for (double cc : kExpLadder) rep.exp_ladder.push_back({cc, detail::scan(f, S, q, nc, cc).best});
        // Smallest rung on the plateau of C*(c), then one rung up as margin for the far field.
        const double plateau = rep.exp_ladder[L - 1].second;
        std::size_t pick = L - 1;
        for (std::size_t k = 0; k < L; ++k)
            if (rep.exp_ladder[k].second <= kExpPlateau * plateau) {
                pick = k;
                break;
            }
        rep.exp_fit_settled = pick + 1 < L;
        c = kExpLadder[std::min(pick + 1, L - 1)];
        rep.exp_constant = c;
    }

    LabRng rng(sp.seed);
    const std::size_t total = sp.samples == 1 ? 1 : 2 * sp.samples;
    auto S = detail::draw_samples(f, rng, total);
    auto q = detail::eval_quantities(f, S, sp.threads);
    rep.evaluated = total;
    for (std::size_t i = 0; i < total; ++i) {
        bool ok = false;
        detail::ratio_of(f, q[i], S[i], c, ok);
        if (!ok) {
            ++rep.rejected;
            if (rep.rejections.size() < 5)
                rep.rejections.push_back("sample " + std::to_string(i) + ": comparator not positive or quantity not finite");
        } else if (!f.log_domain) {
            rep.min_quantity = std::min(rep.min_quantity, q[i]);
        }
    }
    auto base = detail::scan(f, S, q, std::min(total, sp.samples), c);
    auto full = detail::scan(f, S, q, total, c);
    rep.constant = base.best;
    rep.constant_doubled = full.best;
    if (full.any) {
        rep.argmax = S[full.arg];
        rep.argmax_quantity = q[full.arg];
        rep.argmax_comparator = f.comparator(S[full.arg], c);
    }
    if (f.polish && f.group == 1 && sp.polish > 0 && base.any) {
        std::size_t imp_base = 0, imp_full = 0;
        auto pb = detail::polish_best(f, S, q, std::min(total, sp.samples), c, sp.polish, sp.threads, imp_base);
        auto pf = detail::polish_best(f, S, q, total, c, sp.polish, sp.threads, imp_full);
        rep.polished = imp_full;
        rep.constant = std::max(rep.constant, pb.ratio);
        // The doubled sample contains the base sample, so its estimate never drops below the base one.
        detail::Polished top = pf.ratio >= pb.ratio ? pf : pb;
        if (top.ratio > rep.constant_doubled) {
            rep.constant_doubled = top.ratio;
            rep.argmax = top.s;
            rep.argmax_quantity = top.q;
            rep.argmax_comparator = f.comparator(top.s, c);
        }
    }
    rep.finite = std::isfinite(rep.constant) && std::isfinite(rep.constant_doubled) && base.any;
    if (total > 1) {
        rep.stability_evaluated = true;
        rep.stability = rep.constant > 0 ? rep.constant_doubled / rep.constant : 1.0;
        rep.pass = rep.finite && rep.stability <= kStabilityLimit;
    } else {
        rep.pass = rep.finite;
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Comparator pieces

/// 1 + log(c / r^2) where c / r^2 > 1, else 1.
inline double log_factor(double r, double c) {
    double v = c / (r * r);
    return v > 1.0 ? 1.0 + std::log(v) : 1.0;
}

/// |x-z|^{-p} exp(-|x||x-z|/c) exp(-|x-z|^2/c); p == 0 with log_case uses the log factor instead.
inline double size_comparator(const Point& x, const Point& z, double p, double c, bool log_case = false) {
    double r = dist(x, z);
    double e = std::exp(-norm_of(x) * r / c - r * r / c);
    return (log_case ? log_factor(r, c) : std::pow(r, -p)) * e;
}

/// |x1-x2| |x2-z|^{-p} exp(-|z||x2-z|/c) exp(-|x2-z|^2/c).
inline double smooth_comparator(const Sample& s, double p, double c, bool log_case = false) {
    double r = dist(s.x2, s.z);
    double e = std::exp(-norm_of(s.z) * r / c - r * r / c);
    return dist(s.x, s.x2) * (log_case ? log_factor(r, c) : std::pow(r, -p)) * e;
}

/// The three-case comparator of the (eta, rho) lemma.
inline double I_eta_rho(std::size_t n, double eta, double rho, double r, double c) {
    const double e = 0.5 * double(n) + eta + rho;
    if (std::abs(e) < 1e-12) return log_factor(r, c);
    if (e > 0) return std::pow(r, -2.0 * e);
    return 1.0;
}

/// int_0^1 ((1-s)/s)^{n/2} s^{-eta} exp(-c0 [s|x+z|^2 + |x-z|^2/s]) d mu_rho(s).
inline double bt_integral(const SMeasureRule& rule, std::size_t n, double eta, double c0, const Point& x,
                          const Point& z) {
    double a = 0, b = 0, dot = 0;
    detail::sq_sum_diff(x, z, a, b, dot);
    const double e = 0.5 * double(n) + eta + rule.rho();
    auto g = [&](const SNode& nd) {
        const double s = nd.s;
        return std::pow((1.0 - s) * nd.inv_s, 0.5 * double(n)) * std::pow(s, -eta) *
               std::exp(-c0 * (s * a + b * nd.inv_s));
    };
    return rule.integrate(g, e < 0 ? -e : std::numeric_limits<double>::quiet_NaN());
}

// ---------------------------------------------------------------------------------------------
// Samplers

namespace detail {

inline std::function<std::vector<Sample>(LabRng&)> pair_sampler(std::size_t n, double X, double rlo, double rhi) {
    return [=](LabRng& g) {
        Sample s;
        s.x = g.scaled(n, X);
        double r = g.mixed(rlo, rhi);
        s.z = along(s.x, r, g.direction(n));
        return std::vector<Sample>{s};
    };
}

// x1 = s.x, x2 = s.x2 with |x1 - z| > 2 |x1 - x2|.
inline std::function<std::vector<Sample>(LabRng&)> smooth_sampler(std::size_t n, double X, double rlo, double rhi) {
    return [=](LabRng& g) {
        Sample s;
        s.x = g.scaled(n, X);
        double r = g.mixed(rlo, rhi);
        s.z = along(s.x, r, g.direction(n));
        double d = r * g.mixed(1e-3, 0.49);
        s.x2 = along(s.x, d, g.direction(n));
        return std::vector<Sample>{s};
    };
}

inline std::function<std::vector<Sample>(LabRng&)> point_sampler(std::size_t n, double rlo, double rhi) {
    return [=](LabRng& g) {
        Sample s;
        s.x = along(Point(n, 0.0), g.log_uniform(rlo, rhi), g.direction(n));
        return std::vector<Sample>{s};
    };
}

inline std::function<bool(const Sample&)> pair_valid(double rlo) {
    return [rlo](const Sample& s) { return dist(s.x, s.z) >= 0.5 * rlo; };
}
inline std::function<bool(const Sample&)> smooth_valid(double rlo) {
    return [rlo](const Sample& s) {
        double r1 = dist(s.x, s.z), d = dist(s.x, s.x2);
        return r1 > 2.0 * d && d >= 1e-3 * r1 && dist(s.x2, s.z) >= 0.5 * rlo;
    };
}
inline std::function<bool(const Sample&)> point_valid(double rlo, double rhi) {
    return [rlo, rhi](const Sample& s) {
        double r = norm_of(s.x);
        return r >= 0.5 * rlo && r <= rhi;
    };
}

inline std::function<void(const std::vector<Sample>&, std::vector<double>&)> pointwise_q(
    std::function<double(const Sample&)> f) {
    return [f](const std::vector<Sample>& S, std::vector<double>& out) {
        out.resize(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) out[i] = f(S[i]);
    };
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

/// Campaign sizes shared by the lemma forms.
struct LabOptions {
    QuadratureSpec quad{};
    double box = 6.0;       // |x_i| <= box for sampled base points
    double r_min = 1e-5;    // smallest sampled |x - z|
    double r_max = 8.0;     // largest sampled |x - z|
    double b_radius = 20.0; // largest |x| for the B and H^{-sigma}1 bounds
    int shell_directions = 32;
    int shell_gl = 8;
    std::size_t shell_group = 50;
};

namespace detail {

inline KernelSpec make_ks(KernelKind kind, double sigma, int k, std::size_t n, const QuadratureSpec& q) {
    KernelSpec ks;
    ks.kind = kind;
    ks.sigma = sigma;
    ks.k = k;
    ks.dim = n;
    ks.quad = q;
    return ks;
}

inline std::string kernel_label(KernelKind kind, double sigma, int k) {
    switch (kind) {
        case KernelKind::FracPower: return "F_" + fmt(sigma);
        case KernelKind::ShiftPlus: return "F_{" + std::to_string(2 * k) + "," + fmt(sigma) + "}";
        case KernelKind::ShiftMinus: return "F_{-" + std::to_string(2 * k) + "," + fmt(sigma) + "}";
        case KernelKind::FracIntegral: return "F_{-" + fmt(sigma) + "}";
        case KernelKind::ShiftPlusIntegral: return "F_{" + std::to_string(2 * k) + ",-" + fmt(sigma) + "}";
    }
    return "?";
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Shell integrals (cancellation) and L1 rows

enum class ShellKind {
    LadderFracHalf,  // int_{r1<|x-z|<=r2} A_i F_{-1/2}(x,z) dz
    FracTail         // int_{|x-z|>r} F_sigma(x,z) dz
};

struct ShellParams {
    ShellKind kind = ShellKind::LadderFracHalf;
    int index = 1;       // signed ladder index for LadderFracHalf
    double sigma = 0.5;  // for FracTail
    std::size_t dim = 1;
};

/// Angular integrals phi(r) = r^{n-1} sum_d w_d K(x, x + r e_d), integrated over panels with edges
/// built from the requested radii; returns the panel edges and panel integrals.
class ShellProfile {
public:
    ShellProfile(const ShellParams& p, const QuadratureSpec& q, int directions, int gl) : p_(p), q_(q), gl_(gl) {
        QuadratureSpec dq = q;
        dq.directions = directions;
        dirs_ = polar_directions(p.dim, dq);
        if (p.kind == ShellKind::LadderFracHalf) {
            check_ladder_index(p.index, p.dim);
            ker_ = std::make_shared<KernelEvaluator>(detail::make_ks(KernelKind::FracIntegral, 0.5, 0, p.dim, q));
        } else {
            ker_ = std::make_shared<KernelEvaluator>(detail::make_ks(KernelKind::FracPower, p.sigma, 0, p.dim, q));
        }
    }

    double kernel(const Point& x, const Point& z) const {
        if (p_.kind == ShellKind::LadderFracHalf) return ker_->ladder(p_.index, x, z);
        return ker_->value(x, z);
    }

    /// Integral over r1 < |x - z| <= r2 for each requested pair.
    std::vector<double> integrals(const Point& x, const std::vector<std::pair<double, double>>& pairs) const {
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (auto [a, b] : pairs) {
            if (!(a > 0 && b > a)) throw DomainError("cancellation_integral: need 0 < r1 < r2");
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        std::vector<double> edges = radial_edges(lo, std::max(hi, lo * 2));
        for (auto [a, b] : pairs) {
            edges.push_back(a);
            edges.push_back(b);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end(), [](double u, double v) { return v - u <= 1e-15 * v; }),
                    edges.end());
        const auto g = gauss_legendre(gl_);
        const std::size_t n = p_.dim;
        std::vector<double> panel(edges.size() - 1, 0.0);
        Point z(n);
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            double a = edges[k], b = edges[k + 1], c = 0.5 * (a + b), h = 0.5 * (b - a), acc = 0;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                double r = c + h * g.x[i], ang = 0;
                for (std::size_t d = 0; d < dirs_.count(); ++d) {
                    for (std::size_t j = 0; j < n; ++j) z[j] = x[j] + r * dirs_.e[d * n + j];
                    ang += dirs_.w[d] * kernel(x, z);
                }
                acc += h * g.w[i] * std::pow(r, double(n) - 1.0) * ang;
            }
            panel[k] = acc;
        }
        std::vector<double> out;
        for (auto [a, b] : pairs) {
            auto ia = std::size_t(std::lower_bound(edges.begin(), edges.end(), a * (1 - 1e-15)) - edges.begin());
            double s = 0;
            for (std::size_t k = ia; k + 1 < edges.size() && edges[k + 1] <= b * (1 + 1e-15); ++k) s += panel[k];
            out.push_back(s);
        }
        return out;
    }

private:
    ShellParams p_;
    QuadratureSpec q_;
    int gl_;
    PolarDirections dirs_;
    std::shared_ptr<KernelEvaluator> ker_;
};

/// Shell integral over r1 < |x - z| <= r2 by polar quadrature.
inline double cancellation_integral(const ShellParams& p, const Point& x, double r1, double r2,
                                    const QuadratureSpec& q = {}, int directions = 64, int gl = 10) {
    require_dim(x.size(), p.dim, "cancellation_integral");
    if (!(r1 > 0 && r1 < r2)) throw DomainError("cancellation_integral: need 0 < r1 < r2");
    return ShellProfile(p, q, directions, gl).integrals(x, {{r1, r2}})[0];
}

enum class RowKind {
    XPowFracInt,  // |x|^{2 sigma} F_{-sigma}(x,z)
    ZPowFracInt,  // |z|^{2 sigma} F_{-sigma}(x,z)
    XDerivF1      // x_i d_{x_j} F_{-1}(x,z)
};

struct RowParams {
    RowKind kind = RowKind::XPowFracInt;
    double sigma = 0.5;
    std::size_t i = 0, j = 0;  // zero-based axes for XDerivF1
    std::size_t dim = 1;
};

inline std::string row_label(const RowParams& p) {
    switch (p.kind) {
        case RowKind::XPowFracInt: return "|x|^{2s}F_{-" + detail::fmt(p.sigma) + "}";
        case RowKind::ZPowFracInt: return "|z|^{2s}F_{-" + detail::fmt(p.sigma) + "}";
        case RowKind::XDerivF1:
            return "x" + std::to_string(p.i + 1) + " d" + std::to_string(p.j + 1) + " F_{-1}";
    }
    return "?";
}

/// Row integral int |K(x,z)| dz by polar quadrature from radius r_min out to the box.
class RowIntegrator {
public:
    RowIntegrator(const RowParams& p, const QuadratureSpec& q, int directions = 64, int gl = 10, double r_min = 1e-7)
        : p_(p) {
        QuadratureSpec dq = q;
        dq.directions = directions;
        dirs_ = polar_directions(p.dim, dq);
        rule_ = radial_rule(r_min, q.box, gl);
        double sig = p.kind == RowKind::XDerivF1 ? 1.0 : p.sigma;
        ker_ = std::make_shared<KernelEvaluator>(detail::make_ks(KernelKind::FracIntegral, sig, 0, p.dim, q));
        if (p.kind != RowKind::XDerivF1)
            one_ = std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne, BoundaryParams{sig, 0, p.dim, q});
    }

    double integrand(const Point& x, const Point& z) const {
        switch (p_.kind) {
            case RowKind::XPowFracInt: return std::pow(norm_of(x), 2 * p_.sigma) * std::abs(ker_->value(x, z));
            case RowKind::ZPowFracInt: return std::pow(norm_of(z), 2 * p_.sigma) * std::abs(ker_->value(x, z));
            case RowKind::XDerivF1: return std::abs(x[p_.i] * ker_->dx(p_.j, x, z));
        }
        return 0;
    }

    double quadrature(const Point& x) const {
        require_dim(x.size(), p_.dim, "l1_row_integral");
        const std::size_t n = p_.dim;
        Point z(n);
        double s = 0;
        for (std::size_t k = 0; k < rule_.r.size(); ++k) {
            double r = rule_.r[k], ang = 0;
            for (std::size_t d = 0; d < dirs_.count(); ++d) {
                for (std::size_t j = 0; j < n; ++j) z[j] = x[j] + r * dirs_.e[d * n + j];
                ang += dirs_.w[d] * integrand(x, z);
            }
            s += rule_.w[k] * std::pow(r, double(n) - 1.0) * ang;
        }
        return s;
    }

    /// For |x|^{2 sigma} F_{-sigma} the row is exactly |x|^{2 sigma} H^{-sigma}1(x) since F_{-sigma} >= 0.
    double value(const Point& x) const {
        if (p_.kind == RowKind::XPowFracInt) return std::pow(norm_of(x), 2 * p_.sigma) * one_->value(x);
        return quadrature(x);
    }

private:
    RowParams p_;
    PolarDirections dirs_;
    RadialRule rule_;
    std::shared_ptr<KernelEvaluator> ker_;
    std::shared_ptr<BoundaryEvaluator> one_;
};

inline double l1_row_integral(const RowParams& p, const Point& x, const QuadratureSpec& q = {}) {
    return RowIntegrator(p, q).value(x);
}

/// max over the x-sample of the row integral.
inline double l1_row_bound(const RowParams& p, const std::vector<Point>& xs, const QuadratureSpec& q = {},
                           unsigned threads = 0) {
    RowIntegrator R(p, q);
    std::vector<double> v(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { v[i] = R.value(xs[i]); }, threads);
    double m = 0;
    for (double a : v) m = std::max(m, a);
    return m;
}

// ---------------------------------------------------------------------------------------------
// Lemma campaigns

inline std::vector<std::string> lemma_ids() {
    return {"5.1", "5.2", "5.3", "5.4", "5.5", "5.6", "5.7", "5.8", "5.9", "5.10"};
}

inline std::string lemma_title(const std::string& id) {
    if (id == "5.1") return "exponential estimate for psi^a_{s,z}";
    if (id == "5.2") return "(eta,rho) integral against I_{eta,rho}";
    if (id == "5.3") return "size and smoothness of F_sigma, F_{+-2k,sigma}";
    if (id == "5.4") return "growth of B_sigma, B_{+-2k,sigma} and their gradients";
    if (id == "5.5") return "Gaussian bound for the heat kernel";
    if (id == "5.6") return "size and smoothness of F_{-sigma} and its first derivatives";
    if (id == "5.7") return "decay of H^{-sigma}1 and its gradient";
    if (id == "5.8") return "second order kernels R(x,z) built from F_{-1}";
    if (id == "5.9") return "uniform L1 rows";
    if (id == "5.10") return "shell cancellation";
    throw PreconditionError("unknown lemma id '" + id + "' (expected 5.1 .. 5.10)");
}

namespace detail {

inline BoundForm kernel_size_form(const std::string& lemma, const std::string& name, const std::string& display,
                                  const LabOptions& o, std::size_t n, std::function<double(const Sample&)> q, double p,
                                  bool log_case = false) {
    BoundForm f;
    f.lemma = lemma;
    f.name = name;
    f.display = display;
    f.dim = n;
    f.fit_exp = true;
    f.draw = pair_sampler(n, o.box, o.r_min, o.r_max);
    f.valid = pair_valid(o.r_min);
    f.quantity = pointwise_q(std::move(q));
    f.comparator = [p, log_case](const Sample& s, double c) { return size_comparator(s.x, s.z, p, c, log_case); };
    return f;
}

inline BoundForm kernel_smooth_form(const std::string& lemma, const std::string& name, const std::string& display,
                                    const LabOptions& o, std::size_t n, std::function<double(const Sample&)> k,
                                    double p, bool log_case = false) {
    BoundForm f;
    f.lemma = lemma;
    f.name = name;
    f.display = display;
    f.dim = n;
    f.fit_exp = true;
    f.draw = smooth_sampler(n, o.box, o.r_min, o.r_max);
    f.valid = smooth_valid(o.r_min);
    f.quantity = pointwise_q([k](const Sample& s) {
        Sample a = s, b = s;
        b.x = s.x2;
        return k(a) - k(b);
    });
    f.comparator = [p, log_case](const Sample& s, double c) { return smooth_comparator(s, p, c, log_case); };
    return f;
}

inline std::shared_ptr<KernelEvaluator> shared_kernel(KernelKind kind, double sigma, int k, std::size_t n,
                                                      const QuadratureSpec& q) {
    return std::make_shared<KernelEvaluator>(make_ks(kind, sigma, k, n, q));
}

}  // namespace detail

/// Every bound form of one campaign id.
inline std::vector<BoundForm> lemma_forms(const std::string& id, const LabOptions& o = {}) {
    lemma_title(id);  // validates the id
    using detail::fmt;
    std::vector<BoundForm> out;
    const auto& Q = o.quad;

    if (id == "5.1") {
        for (std::size_t n : {1u, 2u})
            for (double a : {0.25, 1.0}) {
                BoundForm f;
                f.lemma = id;
                f.name = "psi a=" + fmt(a) + " n=" + std::to_string(n);
                f.display = "psi^a_{s,z}(x) <= exp(-(a/4)|x||x-z|) exp(-(a/4)|x-z|^2/s)";
                f.dim = n;
                f.log_domain = true;
                f.draw = [n, o](LabRng& g) {
                    Sample s;
                    s.x = g.scaled(n, o.box);
                    s.z = along(s.x, g.mixed(o.r_min, o.r_max), g.direction(n));
                    s.s = g.s_mixture();
                    return std::vector<Sample>{s};
                };
                f.valid = detail::pair_valid(o.r_min);
                f.quantity = detail::pointwise_q([a](const Sample& s) {
                    double p = 0, m = 0, dot = 0;
                    detail::sq_sum_diff(s.x, s.z, p, m, dot);
                    return -a * (s.s * p + m / s.s);
                });
                f.comparator = [a](const Sample& s, double) {
                    double r = dist(s.x, s.z);
                    return -(a / 4) * norm_of(s.x) * r - (a / 4) * r * r / s.s;
                };
                out.push_back(std::move(f));
            }
    } else if (id == "5.2") {
        struct Case {
            std::size_t n;
            double eta, rho;
        };
        for (Case cs : {Case{1, 0.0, 0.4}, Case{1, 0.0, -0.5}, Case{1, 0.0, -0.9}, Case{2, 0.5, -0.5},
                        Case{2, 0.0, -1.0}, Case{1, 0.5, -0.75}}) {
            auto rule = std::make_shared<SMeasureRule>(cs.rho, Q);
            const double e = 0.5 * double(cs.n) + cs.eta + cs.rho;
            const std::string regime = std::abs(e) < 1e-12 ? "=0" : (e > 0 ? ">0" : "<0");
            BoundForm f;
            f.lemma = id;
            f.name = "BT n=" + std::to_string(cs.n) + " eta=" + fmt(cs.eta) + " rho=" + fmt(cs.rho) + " (n/2+eta+rho" +
                     regime + ")";
            f.display = "int ((1-s)/s)^{n/2} s^{-eta} e^{-[s|x+z|^2+|x-z|^2/s]/4} dmu_rho <= C e^{-|x||x-z|/C} "
                        "e^{-|x-z|^2/C} I_{eta,rho}";
            f.dim = cs.n;
            f.fit_exp = true;
            f.draw = detail::pair_sampler(cs.n, o.box, o.r_min, o.r_max);
            f.valid = detail::pair_valid(o.r_min);
            f.quantity = detail::pointwise_q(
                [rule, cs](const Sample& s) { return bt_integral(*rule, cs.n, cs.eta, 0.25, s.x, s.z); });
            f.comparator = [cs](const Sample& s, double c) {
                double r = dist(s.x, s.z);
                return std::exp(-norm_of(s.x) * r / c - r * r / c) * I_eta_rho(cs.n, cs.eta, cs.rho, r, c);
            };
            out.push_back(std::move(f));
        }
    } else if (id == "5.3") {
        struct Case {
            KernelKind kind;
            double sigma;
            int k;
            std::size_t n;
        };
        for (Case cs : {Case{KernelKind::FracPower, 0.4, 0, 1}, Case{KernelKind::FracPower, 0.75, 0, 1},
                        Case{KernelKind::FracPower, 0.6, 0, 2}, Case{KernelKind::ShiftPlus, 0.4, 1, 1},
                        Case{KernelKind::ShiftMinus, 0.4, 1, 1}, Case{KernelKind::ShiftMinus, 0.6, 2, 1},
                        Case{KernelKind::ShiftPlus, 0.6, 1, 2}}) {
            auto K = detail::shared_kernel(cs.kind, cs.sigma, cs.k, cs.n, Q);
            const std::string lab = detail::kernel_label(cs.kind, cs.sigma, cs.k) + " n=" + std::to_string(cs.n);
            const double p = double(cs.n) + 2 * cs.sigma;
            auto val = [K](const Sample& s) { return K->value(s.x, s.z); };
            out.push_back(detail::kernel_size_form(id, "size " + lab,
                                                   "|F(x,z)| <= C |x-z|^{-(n+2s)} e^{-|x||x-z|/C} e^{-|x-z|^2/C}", o,
                                                   cs.n, val, p));
            out.push_back(detail::kernel_smooth_form(
                id, "smooth " + lab,
                "|F(x1,z)-F(x2,z)| <= C |x1-x2| |x2-z|^{-(n+1+2s)} e^{-|z||x2-z|/C} e^{-|x2-z|^2/C}", o, cs.n, val,
                p + 1));
        }
    } else if (id == "5.4") {
        struct Case {
            BoundaryKind kind;
            double sigma;
            int k;
            std::size_t n;
        };
        for (Case cs : {Case{BoundaryKind::Frac, 0.4, 0, 1}, Case{BoundaryKind::Frac, 0.75, 0, 1},
                        Case{BoundaryKind::Frac, 0.6, 0, 2}, Case{BoundaryKind::ShiftPlus, 0.4, 1, 1},
                        Case{BoundaryKind::ShiftMinus, 0.4, 1, 1}, Case{BoundaryKind::ShiftMinus, 0.6, 2, 1}}) {
            auto B = std::make_shared<BoundaryEvaluator>(cs.kind, BoundaryParams{cs.sigma, cs.k, cs.n, Q});
            std::string lab = boundary_kind_name(cs.kind) + " sigma=" + fmt(cs.sigma) +
                              (cs.k ? " k=" + std::to_string(cs.k) : "") + " n=" + std::to_string(cs.n);
            const double sig = cs.sigma;
            BoundForm f;
            f.lemma = id;
            f.dim = cs.n;
            f.draw = detail::point_sampler(cs.n, 1e-3, o.b_radius);
            f.valid = detail::point_valid(1e-3, o.b_radius);
            f.name = "growth " + lab;
            f.display = "|B(x)| <= C (1 + |x|^{2s})";
            f.quantity = detail::pointwise_q([B](const Sample& s) { return B->value(s.x); });
            f.comparator = [sig](const Sample& s, double) { return 1.0 + std::pow(norm_of(s.x), 2 * sig); };
            out.push_back(f);
            f.name = "gradient " + lab;
            f.display = "|grad B(x)| <= C |x| for |x|<=1, C |x|^{2s-1} for |x|>1";
            f.quantity = detail::pointwise_q([B](const Sample& s) { return norm_of(B->gradient(s.x)); });
            f.comparator = [sig](const Sample& s, double) {
                double r = norm_of(s.x);
                return r <= 1.0 ? r : std::pow(r, 2 * sig - 1);
            };
            out.push_back(f);
        }
    } else if (id == "5.5") {
        for (std::size_t n : {1u, 2u, 3u}) {
            BoundForm f;
            f.lemma = id;
            f.name = "heat kernel n=" + std::to_string(n);
            f.display = "G_{t(s)}(x,z) <= C ((1-s)/s)^{n/2} e^{-|x||x-z|/C} e^{-|x-z|^2/(Cs)}";
            f.dim = n;
            f.log_domain = true;
            f.fit_exp = true;
            f.draw = [n, o](LabRng& g) {
                Sample s;
                s.x = g.scaled(n, o.box);
                s.z = along(s.x, g.mixed(o.r_min, o.r_max), g.direction(n));
                s.s = g.s_mixture();
                return std::vector<Sample>{s};
            };
            f.valid = detail::pair_valid(o.r_min);
            f.quantity = detail::pointwise_q([n](const Sample& s) {
                double p = 0, m = 0, dot = 0;
                detail::sq_sum_diff(s.x, s.z, p, m, dot);
                return 0.5 * double(n) * std::log((1 - s.s * s.s) / (4 * std::numbers::pi * s.s)) -
                       0.25 * (s.s * p + m / s.s);
            });
            f.comparator = [n](const Sample& s, double c) {
                double r = dist(s.x, s.z);
                return 0.5 * double(n) * std::log((1 - s.s) / s.s) - norm_of(s.x) * r / c - r * r / (c * s.s);
            };
            out.push_back(std::move(f));
        }
    } else if (id == "5.6") {
        // Size of F_{-sigma} in the three regimes n > 2 sigma, n = 2 sigma, n < 2 sigma.
        struct Case {
            double sigma;
            std::size_t n;
        };
        for (Case cs : {Case{0.3, 1}, Case{0.5, 1}, Case{0.75, 1}, Case{1.0, 1}, Case{0.5, 2}, Case{1.0, 2}}) {
            auto K = detail::shared_kernel(KernelKind::FracIntegral, cs.sigma, 0, cs.n, Q);
            const double e = double(cs.n) - 2 * cs.sigma;
            const bool log_case = std::abs(e) < 1e-12;
            const std::string lab = "F_{-" + fmt(cs.sigma) + "} n=" + std::to_string(cs.n);
            const std::string regime = log_case ? "n=2s" : (e > 0 ? "n>2s" : "n<2s");
            out.push_back(detail::kernel_size_form(
                id, "size " + lab + " (" + regime + ")", "0 <= F_{-s}(x,z) <= C {|x-z|^{2s-n} | log | 1} e^{..}", o,
                cs.n, [K](const Sample& s) { return K->value(s.x, s.z); }, e > 0 ? e : 0.0, log_case));
        }
        // First-order kernels grad_x F_{-s}, x_i F_{-s}, z_i F_{-s}.
        for (Case cs : {Case{0.5, 1}, Case{0.75, 1}, Case{1.0, 1}, Case{0.5, 2}, Case{1.0, 2}}) {
            auto K = detail::shared_kernel(KernelKind::FracIntegral, cs.sigma, 0, cs.n, Q);
            const double e = double(cs.n) + 1 - 2 * cs.sigma;
            const bool log_case = std::abs(e) < 1e-12;
            const std::string lab = "F_{-" + fmt(cs.sigma) + "} n=" + std::to_string(cs.n);
            const std::string disp = "|F(x,z)| <= C {|x-z|^{-(n+1-2s)} | log} e^{..}";
            out.push_back(detail::kernel_size_form(
                id, "size d_x1 " + lab, disp, o, cs.n,
                [K](const Sample& s) { return K->dx(0, s.x, s.z); }, e, log_case));
            out.push_back(detail::kernel_size_form(
                id, "size x1 " + lab, disp, o, cs.n, [K](const Sample& s) { return s.x[0] * K->value(s.x, s.z); }, e,
                log_case));
            out.push_back(detail::kernel_size_form(
                id, "size z1 " + lab, disp, o, cs.n, [K](const Sample& s) { return s.z[0] * K->value(s.x, s.z); }, e,
                log_case));
        }
        // Smoothness of F_{-s} and of the first-order kernels.
        for (Case cs : {Case{0.5, 1}, Case{0.75, 1}, Case{1.0, 1}, Case{0.5, 2}}) {
            auto K = detail::shared_kernel(KernelKind::FracIntegral, cs.sigma, 0, cs.n, Q);
            const std::string lab = "F_{-" + fmt(cs.sigma) + "} n=" + std::to_string(cs.n);
            const bool log_case = cs.sigma == 1.0;
            const double p = double(cs.n) + 1 - 2 * cs.sigma;
            out.push_back(detail::kernel_smooth_form(
                id, "smooth " + lab, "|F_{-s}(x1,z)-F_{-s}(x2,z)| <= C |x1-x2| {|x2-z|^{-(n+1-2s)} | log} e^{..}", o,
                cs.n, [K](const Sample& s) { return K->value(s.x, s.z); }, log_case ? 0.0 : p, log_case));
            const double p2 = double(cs.n) + 2 - 2 * cs.sigma;
            const std::string d2 = "|F(x1,z)-F(x2,z)| <= C |x1-x2| |x2-z|^{-(n+2-2s)} e^{..}";
            out.push_back(detail::kernel_smooth_form(
                id, "smooth d_x1 " + lab, d2, o, cs.n, [K](const Sample& s) { return K->dx(0, s.x, s.z); }, p2));
            out.push_back(detail::kernel_smooth_form(
                id, "smooth x1 " + lab, d2, o, cs.n, [K](const Sample& s) { return s.x[0] * K->value(s.x, s.z); },
                p2));
            out.push_back(detail::kernel_smooth_form(
                id, "smooth z1 " + lab, d2, o, cs.n, [K](const Sample& s) { return s.z[0] * K->value(s.x, s.z); },
                p2));
        }
    } else if (id == "5.7") {
        for (std::size_t n : {1u, 2u})
            for (double sig : {0.3, 0.5, 1.0}) {
                auto B = std::make_shared<BoundaryEvaluator>(BoundaryKind::IntegralOfOne,
                                                             BoundaryParams{sig, 0, n, Q});
                const std::string lab = "H^{-" + fmt(sig) + "}1 n=" + std::to_string(n);
                BoundForm f;
                f.lemma = id;
                f.dim = n;
                f.draw = detail::point_sampler(n, 1e-3, 2 * o.b_radius);
                f.valid = detail::point_valid(1e-3, 2 * o.b_radius);
                f.name = "decay " + lab;
                f.display = "|H^{-s}1(x)| <= C (1+|x|)^{-2s}";
                f.quantity = detail::pointwise_q([B](const Sample& s) { return B->value(s.x); });
                f.comparator = [sig](const Sample& s, double) { return std::pow(1 + norm_of(s.x), -2 * sig); };
                out.push_back(f);
                f.name = "gradient " + lab;
                f.display = "|grad H^{-s}1(x)| <= C (1+|x|)^{-1-2s}";
                f.quantity = detail::pointwise_q([B](const Sample& s) { return norm_of(B->gradient(s.x)); });
                f.comparator = [sig](const Sample& s, double) { return std::pow(1 + norm_of(s.x), -1 - 2 * sig); };
                out.push_back(f);
            }
    } else if (id == "5.8") {
        for (std::size_t n : {1u, 2u}) {
            auto K = detail::shared_kernel(KernelKind::FracIntegral, 1.0, 0, n, Q);
            const std::size_t i = 0, j = n == 1 ? 0 : 1;
            const int si = 1, sj = n == 1 ? 1 : 2;
            struct Named {
                std::string name;
                std::function<double(const Sample&)> f;
            };
            const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
            std::vector<Named> kinds = {
                {"d2_" + ij + " F_{-1}",
                 [K, i, j](const Sample& s) { return KernelEvaluator::d2_from(K->moments(s.x, s.z), i, j, s.x, s.z); }},
                {"x" + std::to_string(i + 1) + " d" + std::to_string(j + 1) + " F_{-1}",
                 [K, i, j](const Sample& s) { return s.x[i] * K->dx(j, s.x, s.z); }},
                {"x" + std::to_string(i + 1) + " x" + std::to_string(j + 1) + " F_{-1}",
                 [K, i, j](const Sample& s) { return s.x[i] * s.x[j] * K->value(s.x, s.z); }},
                {"R_{" + std::to_string(si) + "," + std::to_string(sj) + "}",
                 [K, si, sj](const Sample& s) { return K->ladder2(si, sj, s.x, s.z); }},
                {"R_{" + std::to_string(si) + ",-" + std::to_string(sj) + "}",
                 [K, si, sj](const Sample& s) { return K->ladder2(si, -sj, s.x, s.z); }},
            };
            for (auto& kd : kinds) {
                const std::string lab = kd.name + " n=" + std::to_string(n);
                out.push_back(detail::kernel_size_form(id, "size " + lab,
                                                       "|R(x,z)| <= C |x-z|^{-n} e^{-|x||x-z|/C} e^{-|x-z|^2/C}", o,
                                                       n, kd.f, double(n)));
                out.push_back(detail::kernel_smooth_form(
                    id, "smooth " + lab,
                    "|R(x1,z)-R(x2,z)| <= C |x1-x2| |x2-z|^{-(n+1)} e^{-|z||x2-z|/C} e^{-|x2-z|^2/C}", o, n, kd.f,
                    double(n) + 1));
            }
        }
    } else if (id == "5.9") {
        std::vector<RowParams> rows = {
            {RowKind::XPowFracInt, 0.5, 0, 0, 1}, {RowKind::XPowFracInt, 1.0, 0, 0, 1},
            {RowKind::XPowFracInt, 0.3, 0, 0, 2}, {RowKind::ZPowFracInt, 0.5, 0, 0, 1},
            {RowKind::ZPowFracInt, 1.0, 0, 0, 1}, {RowKind::XDerivF1, 1.0, 0, 0, 1},
            {RowKind::XDerivF1, 1.0, 0, 0, 2},    {RowKind::XDerivF1, 1.0, 0, 1, 2},
        };
        for (const auto& rp : rows) {
            const int dirs = rp.dim == 1 ? 2 : o.shell_directions / 2;
            auto R = std::make_shared<RowIntegrator>(rp, Q, dirs, 6, rp.dim == 1 ? 1e-7 : 1e-4);
            BoundForm f;
            f.lemma = id;
            f.name = "row " + row_label(rp) + " n=" + std::to_string(rp.dim);
            f.display = "sup_x int |K(x,z)| dz <= C";
            f.dim = rp.dim;
            f.draw = detail::point_sampler(rp.dim, 1e-2, o.b_radius);
            f.valid = detail::point_valid(1e-2, o.b_radius);
            f.quantity = detail::pointwise_q([R](const Sample& s) { return R->value(s.x); });
            f.comparator = [](const Sample&, double) { return 1.0; };
            out.push_back(std::move(f));
        }
    } else if (id == "5.10") {
        struct Case {
            ShellParams p;
            std::string name, display;
        };
        std::vector<Case> cases = {
            {{ShellKind::LadderFracHalf, 1, 0.5, 1}, "shell A_1 F_{-1/2} n=1",
             "|int_{r1<|x-z|<=r2} A_i F_{-1/2}(x,z) dz| <= C"},
            {{ShellKind::LadderFracHalf, -1, 0.5, 1}, "shell A_{-1} F_{-1/2} n=1",
             "|int_{r1<|x-z|<=r2} A_i F_{-1/2}(x,z) dz| <= C"},
            {{ShellKind::LadderFracHalf, 1, 0.5, 2}, "shell A_1 F_{-1/2} n=2",
             "|int_{r1<|x-z|<=r2} A_i F_{-1/2}(x,z) dz| <= C"},
            {{ShellKind::FracTail, 0, 0.4, 1}, "tail F_0.4 n=1 (gamma=2s)", "|int_{|x-z|>r} F_s(x,z) dz| <= C r^{-2s}"},
            {{ShellKind::FracTail, 0, 0.75, 1}, "tail F_0.75 n=1 (gamma=2s)",
             "|int_{|x-z|>r} F_s(x,z) dz| <= C r^{-2s}"},
            {{ShellKind::FracTail, 0, 0.4, 2}, "tail F_0.4 n=2 (gamma=2s)", "|int_{|x-z|>r} F_s(x,z) dz| <= C r^{-2s}"},
        };
        for (auto& cs : cases) {
            const std::size_t n = cs.p.dim;
            auto prof =
                std::make_shared<ShellProfile>(cs.p, Q, n == 1 ? 2 : o.shell_directions, o.shell_gl);
            const std::size_t G = o.shell_group;
            const bool tail = cs.p.kind == ShellKind::FracTail;
            const double rmax = Q.box, sig = cs.p.sigma;
            const double rlo = o.r_min / 10;
            BoundForm f;
            f.lemma = id;
            f.name = cs.name;
            f.display = cs.display;
            f.dim = n;
            f.group = G;
            f.draw = [n, G, o, tail, rmax, rlo](LabRng& g) {
                Point x = g.box(n, o.box);
                std::vector<Sample> blk(G);
                for (auto& s : blk) {
                    s.x = x;
                    if (tail) {
                        s.r1 = g.log_uniform(rlo, rmax * 0.999);
                        s.r2 = rmax;
                    } else {
                        s.r1 = g.log_uniform(rlo, rmax * 0.999);
                        s.r2 = g.log_uniform(s.r1 * 1.0001, rmax);
                    }
                }
                return blk;
            };
            f.quantity = [prof, tail, sig](const std::vector<Sample>& S, std::vector<double>& outq) {
                std::vector<std::pair<double, double>> pairs;
                for (const auto& s : S) pairs.push_back({s.r1, s.r2});
                outq = prof->integrals(S[0].x, pairs);
                if (tail)
                    for (std::size_t i = 0; i < S.size(); ++i) outq[i] *= std::pow(S[i].r1, 2 * sig);
            };
            f.comparator = [](const Sample&, double) { return 1.0; };
            out.push_back(std::move(f));
        }
    }
    return out;
}

inline std::vector<BoundFitReport> run_lemma(const std::string& id, const SamplerSpec& sp, const LabOptions& o = {}) {
    std::vector<BoundFitReport> reps;
    for (const auto& f : lemma_forms(id, o)) reps.push_back(fit_bound_constant(f, sp));
    return reps;
}

// ---------------------------------------------------------------------------------------------
// Mollifier f_j = zeta(x/j) (u * W_{1/j})(x)

struct MollifierSpec {
    int j = 1;
    int nodes = 64;  // Gauss-Hermite nodes per axis for the convolution
};

/// Smooth cutoff: 1 on |y| <= 1, 0 on |y| >= 2.
inline double mollifier_cutoff(const Point& y) {
    const double r = norm_of(y);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    auto psi = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    double a = psi(2.0 - r), b = psi(r - 1.0);
    return a / (a + b);
}

/// Gauss-Weierstrass kernel (4 pi t)^{-n/2} exp(-|z|^2/(4t)).
inline double gauss_weierstrass(double t, const Point& z) {
    require(t > 0, "gauss_weierstrass: t must be > 0");
    double r2 = 0;
    for (double c : z) r2 += c * c;
    return std::pow(4 * std::numbers::pi * t, -0.5 * double(z.size())) * std::exp(-r2 / (4 * t));
}

/// (u * W_t)(x) by tensor Gauss-Hermite quadrature in the variable xi = y / (2 sqrt t).
inline double heat_convolve(const Evaluable& u, double t, const Point& x, int nodes = 64) {
    const std::size_t n = x.size();
    auto rule = quadrature_rule(nodes);
    const std::size_t m = rule.size();
    std::vector<double> raw(m);
    for (std::size_t i = 0; i < m; ++i) raw[i] = rule.weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]);
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= m;
    const double sc = 2.0 * std::sqrt(t);
    double s = 0;
    Point y(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        double w = 1;
        for (std::size_t d = n; d-- > 0;) {
            std::size_t k = r % m;
            r /= m;
            y[d] = x[d] - sc * rule.nodes[k];
            w *= raw[k];
        }
        s += w * u(y);
    }
    return s * std::pow(std::numbers::pi, -0.5 * double(n));
}

inline double mollify(const Evaluable& u, const MollifierSpec& spec, const Point& x) {
    require(spec.j >= 1, "mollify: j must be >= 1");
    require_dim(x.size(), u.dim, "mollify");
    Point y = x;
    for (auto& c : y) c /= spec.j;
    double z = mollifier_cutoff(y);
    if (z == 0.0) return 0.0;
    return z * heat_convolve(u, 1.0 / spec.j, x, spec.nodes);
}

// ---------------------------------------------------------------------------------------------
// Schauder ratios

enum class SchauderCase { A1, A2, A3, B1, B2, B3, Ri, Rij, RiStar };

inline std::string schauder_case_name(SchauderCase c) {
    switch (c) {
        case SchauderCase::A1: return "A1";
        case SchauderCase::A2: return "A2";
        case SchauderCase::A3: return "A3";
        case SchauderCase::B1: return "B1";
        case SchauderCase::B2: return "B2";
        case SchauderCase::B3: return "B3";
        case SchauderCase::Ri: return "R_i";
        case SchauderCase::Rij: return "R_ij";
        case SchauderCase::RiStar: return "R_i^*";
    }
    return "?";
}

inline SchauderCase parse_schauder_case(const std::string& s) {
    for (auto c : {SchauderCase::A1, SchauderCase::A2, SchauderCase::A3, SchauderCase::B1, SchauderCase::B2,
                   SchauderCase::B3, SchauderCase::Ri, SchauderCase::Rij, SchauderCase::RiStar})
        if (schauder_case_name(c) == s) return c;
    if (s == "Ri") return SchauderCase::Ri;
    if (s == "Rij") return SchauderCase::Rij;
    if (s == "Ri*" || s == "RiStar") return SchauderCase::RiStar;
    throw PreconditionError("unknown theorem case '" + s + "' (expected A1 A2 A3 B1 B2 B3 R_i R_ij R_i^*)");
}

struct SchauderSpaces {
    int src_k = 0;
    double src_alpha = 0;
    int tgt_k = 0;
    double tgt_alpha = 0;
};

/// Source and target spaces; throws PreconditionError naming the violated inequality.
inline SchauderSpaces schauder_spaces(SchauderCase c, double alpha, double sigma) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw PreconditionError(what + " violated");
    };
    need(alpha > 0 && alpha <= 1, "0<alpha<=1");
    switch (c) {
        case SchauderCase::A1:
            need(sigma > 0 && sigma < 1, "0<sigma<1");
            need(2 * sigma < alpha, "2σ<α");
            return {0, alpha, 0, alpha - 2 * sigma};
        case SchauderCase::A2:
            need(sigma > 0 && sigma < 1, "0<sigma<1");
            need(2 * sigma < alpha, "2σ<α");
            return {1, alpha, 1, alpha - 2 * sigma};
        case SchauderCase::A3: {
            need(sigma > 0 && sigma < 1, "0<sigma<1");
            need(2 * sigma >= alpha, "2σ≥α");
            const double b = alpha - 2 * sigma + 1;
            need(std::abs(b) > 1e-12, "α−2σ+1≠0");
            need(b > 0, "α−2σ+1>0");
            return {1, alpha, 0, b};
        }
        case SchauderCase::B1:
            need(sigma > 0 && sigma <= 1, "0<sigma<=1");
            need(alpha + 2 * sigma <= 1 + 1e-12, "α+2σ≤1");
            return {0, alpha, 0, std::min(1.0, alpha + 2 * sigma)};
        case SchauderCase::B2:
            need(sigma > 0 && sigma <= 1, "0<sigma<=1");
            need(alpha + 2 * sigma > 1 + 1e-12 && alpha + 2 * sigma <= 2 + 1e-12, "1<α+2σ≤2");
            return {0, alpha, 1, std::min(1.0, alpha + 2 * sigma - 1)};
        case SchauderCase::B3:
            need(sigma > 0 && sigma <= 1, "0<sigma<=1");
            need(alpha + 2 * sigma > 2 + 1e-12 && alpha + 2 * sigma <= 3 + 1e-12, "2<α+2σ≤3");
            return {0, alpha, 2, std::min(1.0, alpha + 2 * sigma - 2)};
        case SchauderCase::Ri:
        case SchauderCase::Rij:
        case SchauderCase::RiStar:
            need(alpha < 1, "0<α<1");
            return {0, alpha, 0, alpha};
    }
    throw PreconditionError("schauder_spaces: unknown case");
}

/// Five admissible (alpha, sigma) pairs per alpha row; Riesz cases ignore sigma.
inline std::vector<std::pair<double, double>> schauder_grid(SchauderCase c) {
    std::vector<std::pair<double, double>> g;
    const double fr[] = {0.2, 0.4, 0.6, 0.8, 1.0};
    const double al[] = {0.2, 0.4, 0.6, 0.8, 1.0};
    for (double a : al)
        for (double f : fr) {
            double s = 0;
            switch (c) {
                case SchauderCase::A1:
                case SchauderCase::A2: s = 0.8 * f * a / 2; break;
                case SchauderCase::A3: {
                    double hi = std::min((1 + a) / 2, 1.0);
                    s = a / 2 + (f - 0.2) * (hi - a / 2);
                    break;
                }
                case SchauderCase::B1: {
                    double aa = a / 2;  // alpha in (0, 0.5]
                    s = f * (1 - aa) / 2;
                    g.push_back({aa, s});
                    continue;
                }
                case SchauderCase::B2: {
                    double lo = (1 - a) / 2, hi = std::min(1.0, (2 - a) / 2);
                    s = lo + f * (hi - lo);
                    break;
                }
                case SchauderCase::B3: {
                    double lo = (2 - a) / 2;
                    s = lo + f * (1 - lo);
                    break;
                }
                case SchauderCase::Ri:
                case SchauderCase::Rij:
                case SchauderCase::RiStar:
                    if (f != 1.0) continue;
                    g.push_back({std::min(a, 0.9), 0.0});
                    continue;
            }
            g.push_back({a, s});
        }
    return g;
}

struct FamilySpec {
    std::size_t size = 12;
    double L = 8.0;
    double h = 0.02;
    int degree = 320;
    int nodes = 400;
    HolderOptions holder{1.0, 20000, kDefaultSeed, 0};
};

/// Twelve widths, geometric from 0.25 to 1.2.
inline double family_width(std::size_t k) { return 0.25 * std::pow(1.2 / 0.25, double(k) / 11.0); }

/// Member m: blocks of six; blocks 0-1 use the odd rungs of the width ladder, blocks 2-3 the
/// even rungs (including the narrowest), and so on. Each block has its own centre from the
/// base-2 van der Corput sequence mapped to [-1.5, 1.5]. The first 12 members are therefore a
/// proper subfamily of the first 24, and doubling adds both new widths and new centres.
inline Evaluable gaussian_member(std::size_t m) {
    const std::size_t block = m / 6, p = m % 6;
    const double w = family_width(2 * p + ((block / 2) % 2 == 0 ? 1 : 0));
    double v = 0, f = 0.5;
    for (std::size_t q = block + 1; q; q >>= 1, f *= 0.5)
        if (q & 1) v += f;
    const double c = -1.5 + 3.0 * v;
    Evaluable u = gaussian({c}, w);
    u.name = "gauss:" + detail::fmt(c) + "," + detail::fmt(w);
    return u;
}

struct SchauderReport {
    std::string case_name;
    double alpha = 0, sigma = 0;
    SchauderSpaces spaces;
    std::size_t family = 0;
    double ratio = 0;          // max over the family
    double ratio_doubled = 0;  // max over the doubled family
    double growth = 1;         // ratio_doubled / ratio
    bool stable = false;       // growth <= 1.15
    std::string argmax_member;
    std::string argmax_variant;
};

inline constexpr double kFamilyGrowthLimit = 1.15;

namespace detail {

struct Variant {
    std::string name;
    std::function<SpectralCoeffs(const SpectralCoeffs&)> op;
};

inline std::vector<Variant> schauder_variants(SchauderCase c, double sigma) {
    switch (c) {
        case SchauderCase::A1:
        case SchauderCase::A2:
        case SchauderCase::A3:
            return {{"H^s", [sigma](const SpectralCoeffs& u) { return multiplier_apply({sigma, 0}, u); }}};
        case SchauderCase::B1:
        case SchauderCase::B2:
        case SchauderCase::B3:
            return {{"H^-s", [sigma](const SpectralCoeffs& u) { return multiplier_apply({-sigma, 0}, u); }}};
        case SchauderCase::Ri: {
            std::vector<Variant> v;
            for (int i : {1, -1})
                v.push_back({"R_" + std::to_string(i),
                             [i](const SpectralCoeffs& u) { return riesz_spectral(RieszKind::First, {i}, u); }});
            return v;
        }
        case SchauderCase::Rij: {
            std::vector<Variant> v;
            for (int i : {1, -1})
                for (int j : {1, -1})
                    v.push_back({"R_" + std::to_string(i) + "," + std::to_string(j), [i, j](const SpectralCoeffs& u) {
                                     return riesz_spectral(RieszKind::Second, {i, j}, u);
                                 }});
            return v;
        }
        case SchauderCase::RiStar: {
            std::vector<Variant> v;
            for (int i : {1, -1})
                v.push_back({"R^*_" + std::to_string(i),
                             [i](const SpectralCoeffs& u) { return riesz_spectral(RieszKind::Adjoint, {i}, u); }});
            return v;
        }
    }
    return {};
}

}  // namespace detail

/// max over the Gaussian family of ||T u||_target / ||u||_source on the spectral route (n = 1).
/// The family of size `size` is compared with its doubled superset.
inline SchauderReport schauder_ratio(SchauderCase c, double alpha, double sigma, const FamilySpec& fam = {}) {
    const SchauderSpaces sp = schauder_spaces(c, alpha, sigma);
    require(fam.size >= 1, "schauder_ratio: family must be non-empty");
    SchauderReport rep;
    rep.case_name = schauder_case_name(c);
    rep.alpha = alpha;
    rep.sigma = sigma;
    rep.spaces = sp;
    rep.family = fam.size;
    const auto rule = quadrature_rule(fam.nodes);
    const auto variants = detail::schauder_variants(c, sigma);
    const std::size_t total = 2 * fam.size;
    std::vector<double> best(total, 0.0);
    std::vector<std::size_t> best_v(total, 0);
    parallel_for(
        total,
        [&](std::size_t m) {
            Evaluable u = gaussian_member(m);
            SpectralCoeffs cu = expand(u.value, 1, fam.degree, rule);
            GridFunction gu = grid_from_spectral(cu, fam.L, fam.h, sp.src_k);
            double in = norm_ck_alpha(gu, sp.src_k, sp.src_alpha, fam.holder).ck_norm;
            for (std::size_t v = 0; v < variants.size(); ++v) {
                SpectralCoeffs tu = variants[v].op(cu);
                GridFunction gt = grid_from_spectral(tu, fam.L, fam.h, sp.tgt_k);
                double out = norm_ck_alpha(gt, sp.tgt_k, sp.tgt_alpha, fam.holder).ck_norm;
                double r = out / in;
                if (r > best[m]) {
                    best[m] = r;
                    best_v[m] = v;
                }
            }
        },
        fam.holder.threads);
    std::size_t arg = 0;
    for (std::size_t m = 0; m < total; ++m) {
        if (m < fam.size) rep.ratio = std::max(rep.ratio, best[m]);
        if (best[m] > best[arg]) arg = m;
    }
    rep.ratio_doubled = best[arg];
    rep.growth = rep.ratio > 0 ? rep.ratio_doubled / rep.ratio : 1.0;
    rep.stable = std::isfinite(rep.ratio_doubled) && rep.growth <= kFamilyGrowthLimit;
    rep.argmax_member = gaussian_member(arg).name;
    rep.argmax_variant = variants[best_v[arg]].name;
    return rep;
}

// ---------------------------------------------------------------------------------------------
// PV shell exponent

struct ShellExponent {
    double alpha = 0, sigma = 0;
    double predicted = 0;  // alpha - 2 sigma + 1
    double measured = 0;   // least-squares slope of log|I(delta)| against log delta
    std::vector<double> deltas, shells;
};

/// Shell contribution I(delta) = int_{|x0-z|<delta} (u(x0) - u(z)) F_sigma(x0,z) dz for
/// u(z) = |z - x0|^{1+alpha} zeta(z - x0), a C^{1,alpha} function vanishing to that order at x0.
inline ShellExponent pv_shell_exponent(double alpha, double sigma, std::size_t n = 1, const QuadratureSpec& q = {},
                                       std::vector<double> deltas = {}) {
    require(alpha > 0 && alpha <= 1, "pv_shell_exponent: alpha must lie in (0,1]");
    require(sigma > 0 && sigma < 1, "pv_shell_exponent: sigma must lie in (0,1)");
    const double pred = alpha - 2 * sigma + 1;
    require(pred > 0, "pv_shell_exponent: needs alpha - 2 sigma + 1 > 0");
    if (deltas.empty())
        for (int k = 4; k <= 12; ++k) deltas.push_back(std::ldexp(1.0, -k));
    ShellExponent res;
    res.alpha = alpha;
    res.sigma = sigma;
    res.predicted = pred;
    res.deltas = deltas;
    KernelEvaluator K(detail::make_ks(KernelKind::FracPower, sigma, 0, n, q));
    auto dirs = polar_directions(n, q);
    // Base point at the origin keeps z - x0 = r e exact down to the smallest radii.
    const Point x0(n, 0.0);
    auto g = gauss_legendre(q.gl_order);
    // phi(r) = r^{n-1} sum_d w_d (u(x0) - u(z)) F(x0, z), with u(x0) = 0.
    auto phi = [&](double r) {
        double a = 0;
        Point z(n);
        for (std::size_t d = 0; d < dirs.count(); ++d) {
            for (std::size_t j = 0; j < n; ++j) z[j] = r * dirs.e[d * n + j];
            double u = std::pow(r, 1 + alpha) * mollifier_cutoff(z);
            a += dirs.w[d] * (-u) * K.value(x0, z);
        }
        return a * std::pow(r, double(n) - 1);
    };
    for (double delta : deltas) {
        // geometric panels on (delta 2^{-60}, delta); the rest behaves like r^{alpha - 2 sigma}.
        double s = 0, b = delta;
        for (int p = 0; p < 60; ++p) {
            double a = 0.5 * b, c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (std::size_t i = 0; i < g.x.size(); ++i) s += h * g.w[i] * phi(c + h * g.x[i]);
            b = a;
        }
        s += phi(b) * b / pred;
        res.shells.push_back(s);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        double lx = std::log(deltas[i]), ly = std::log(std::abs(res.shells[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    res.measured = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return res;
}

}  // namespace hfrac
