#pragma once

// Sampled estimates of the Hermite-Holder seminorms
//   [u]_{C^{0,a}} = sup |u(x1)-u(x2)| / |x1-x2|^a,   [u]_{M^a} = sup (1+|x|)^a |u(x)|
// and of the C^{k,a}_H norm assembled from ladder-derivative grids.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hfrac/derivatives_riesz.hpp"
#include "hfrac/errors.hpp"
#include "hfrac/function.hpp"
#include "hfrac/grid.hpp"
#include "hfrac/hermite_basis.hpp"
#include "hfrac/parallel.hpp"

namespace hfrac {

struct HolderOptions {
    double near_radius = 1.0;              // all pairs closer than this are visited
    std::size_t far_pairs = 100000;        // extra random pairs at any distance
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
};

struct HolderEstimate {
    double value = 0.0;
    std::size_t i = 0, j = 0;  // attaining pair (flat indices, i < j)
    Point x1, x2;
    std::size_t pairs = 0;
};

struct WeightEstimate {
    double value = 0.0;
    std::size_t index = 0;
    Point x;
    bool on_boundary = false;  // maximum sits on the outermost grid layer
};

namespace detail {

// Portable index draw in [0, m) from a 64-bit engine.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t m) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    auto k = static_cast<std::size_t>(u * double(m));
    return k < m ? k : m - 1;
}

// Strictly larger quotient wins; equal quotients keep the lexicographically smaller pair.
inline bool better(double q, std::size_t i, std::size_t j, double best, std::size_t bi, std::size_t bj) {
    if (q != best) return q > best;
    return i < bi || (i == bi && j < bj);
}

inline bool on_outer_layer(const GridFunction& g, std::size_t flat) {
    for (auto c : g.multi(flat))
        if (c == 0 || c + 1 == g.per_axis()) return true;
    return false;
}

}  // namespace detail

inline HolderEstimate seminorm_holder(const GridFunction& u, double alpha, const HolderOptions& opt = {}) {
    require(alpha > 0.0 && alpha <= 1.0, "seminorm_holder: alpha must lie in (0, 1]");
    const std::size_t N = u.size(), n = u.dim(), m = u.per_axis();
    if (N < 2) throw PreconditionError("seminorm_holder: degenerate grid (single point)");
    const double h = u.step();
    const int reach = static_cast<int>(std::floor(opt.near_radius / h + 1e-9));

    // Offsets within the near radius that are lexicographically positive, so each pair is visited once.
    std::vector<std::vector<int>> offsets;
    std::vector<double> dist_alpha;
    {
        std::vector<int> o(n, -reach);
        while (true) {
            long r2 = 0;
            for (int c : o) r2 += long(c) * c;
            bool positive = false;
            for (int c : o)
                if (c != 0) {
                    positive = c > 0;
                    break;
                }
            if (positive && double(r2) * h * h <= opt.near_radius * opt.near_radius * (1 + 1e-12)) {
                offsets.push_back(o);
                dist_alpha.push_back(std::pow(std::sqrt(double(r2)) * h, alpha));
            }
            std::size_t d = n;
            while (d-- > 0) {
                if (++o[d] <= reach) break;
                o[d] = -reach;
                if (d == 0) goto done;
            }
        }
    done:;
    }

    struct Best {
        double q = -1.0;
        std::size_t i = 0, j = 0;
        std::size_t count = 0;
    };
    std::vector<Best> per(N);
    const auto& v = u.values();
    parallel_for(
        N,
        [&](std::size_t p) {
            auto mi = u.multi(p);
            Best b;
            for (std::size_t k = 0; k < offsets.size(); ++k) {
                std::size_t flat = 0;
                bool inside = true;
                for (std::size_t d = 0; d < n; ++d) {
                    long c = long(mi[d]) + offsets[k][d];
                    if (c < 0 || c >= long(m)) {
                        inside = false;
                        break;
                    }
                    flat = flat * m + std::size_t(c);
                }
                if (!inside) continue;
                ++b.count;
                double q = std::abs(v[p] - v[flat]) / dist_alpha[k];
                std::size_t a = std::min(p, flat), c = std::max(p, flat);
                if (detail::better(q, a, c, b.q, b.i, b.j)) b = {q, a, c, b.count};
            }
            per[p] = b;
        },
        opt.threads);

    HolderEstimate est;
    est.value = -1.0;
    for (const auto& b : per) {
        est.pairs += b.count;
        if (b.q >= 0 && detail::better(b.q, b.i, b.j, est.value, est.i, est.j)) {
            est.value = b.q;
            est.i = b.i;
            est.j = b.j;
        }
    }
    std::mt19937_64 rng(opt.seed);
    for (std::size_t t = 0; t < opt.far_pairs; ++t) {
        std::size_t a = detail::draw_index(rng, N), c = detail::draw_index(rng, N);
        if (a == c) continue;
        if (a > c) std::swap(a, c);
        Point pa = u.point(a), pc = u.point(c);
        double r2 = 0;
        for (std::size_t d = 0; d < n; ++d) r2 += (pa[d] - pc[d]) * (pa[d] - pc[d]);
        ++est.pairs;
        double q = std::abs(v[a] - v[c]) / std::pow(std::sqrt(r2), alpha);
        if (detail::better(q, a, c, est.value, est.i, est.j)) {
            est.value = q;
            est.i = a;
            est.j = c;
        }
    }
    if (est.value < 0) est.value = 0;
    est.x1 = u.point(est.i);
    est.x2 = u.point(est.j);
    return est;
}

inline WeightEstimate seminorm_weight(const GridFunction& u, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "seminorm_weight: alpha must lie in (0, 1]");
    WeightEstimate est;
    est.value = -1.0;
    for (std::size_t p = 0; p < u.size(); ++p) {
        Point x = u.point(p);
        double r2 = 0;
        for (double c : x) r2 += c * c;
        double q = std::pow(1.0 + std::sqrt(r2), alpha) * std::abs(u[p]);
        if (q > est.value) {
            est.value = q;
            est.index = p;
        }
    }
    est.x = u.point(est.index);
    est.on_boundary = est.value > 0 && detail::on_outer_layer(u, est.index);
    if (est.value == 0) est.on_boundary = false;
    return est;
}

/// All signed ladder words of length m in dimension n (letters +-1..+-n).
inline std::vector<LadderWord> ladder_words(std::size_t n, int m) {
    std::vector<int> letters;
    for (int i = 1; i <= int(n); ++i) {
        letters.push_back(i);
        letters.push_back(-i);
    }
    std::vector<LadderWord> out{{}};
    for (int len = 0; len < m; ++len) {
        std::vector<LadderWord> next;
        for (const auto& w : out)
            for (int l : letters) {
                LadderWord x = w;
                x.push_back(l);
                next.push_back(std::move(x));
            }
        out = std::move(next);
    }
    return out;
}

struct HolderTerm {
    LadderWord word;
    std::string kind;  // "M" or "C"
    double value = 0.0;
    bool on_boundary = false;
};

struct HolderReport {
    double alpha = 0.0;
    int k = 0;
    double seminorm_C = 0.0;
    double seminorm_M = 0.0;
    double ck_norm = 0.0;
    Point argmax_C_x1, argmax_C_x2;
    Point argmax_M;
    bool boundary_attained = false;  // some M-term maximum sits on the outer layer
    std::vector<HolderTerm> terms;
};

/// ||u||_{C^{k,a}_H} = [u]_M + sum_{1<=m<=k} sum_{|w|=m} [A_w u]_M + sum_{|w|=k} [A_w u]_{C^{0,a}}.
inline HolderReport norm_ck_alpha(const GridFunction& u, int k, double alpha, const HolderOptions& opt = {}) {
    require(k >= 0, "norm_ck_alpha: k must be >= 0");
    std::vector<std::string> missing;
    for (int m = 1; m <= k; ++m)
        for (const auto& w : ladder_words(u.dim(), m))
            if (!u.has(w)) missing.push_back(word_str(w));
    if (!missing.empty()) {
        std::string msg = "norm_ck_alpha: missing derivative grid(s):";
        for (const auto& s : missing) msg += " [" + s + "]";
        throw PreconditionError(msg);
    }
    HolderReport rep;
    rep.alpha = alpha;
    rep.k = k;
    const GridFunction base = u.without_derivatives();
    auto wm = seminorm_weight(base, alpha);
    auto hc = seminorm_holder(base, alpha, opt);
    rep.seminorm_M = wm.value;
    rep.argmax_M = wm.x;
    rep.seminorm_C = hc.value;
    rep.argmax_C_x1 = hc.x1;
    rep.argmax_C_x2 = hc.x2;
    rep.boundary_attained = wm.on_boundary;

    double total = wm.value;
    rep.terms.push_back({{}, "M", wm.value, wm.on_boundary});
    for (int m = 1; m <= k; ++m)
        for (const auto& w : ladder_words(u.dim(), m)) {
            auto e = seminorm_weight(u.derivative(w), alpha);
            total += e.value;
            rep.boundary_attained = rep.boundary_attained || e.on_boundary;
            rep.terms.push_back({w, "M", e.value, e.on_boundary});
        }
    if (k == 0) {
        total += hc.value;
        rep.terms.push_back({{}, "C", hc.value, false});
    } else {
        for (const auto& w : ladder_words(u.dim(), k)) {
            double c = seminorm_holder(u.derivative(w), alpha, opt).value;
            total += c;
            rep.terms.push_back({w, "C", c, false});
        }
    }
    rep.ck_norm = total;
    return rep;
}

/// The synthesized expansion as a function with its analytic gradient.
inline Evaluable spectral_evaluable(SpectralCoeffs c, std::string name = "spectral") {
    auto cc = std::make_shared<SpectralCoeffs>(std::move(c));
    Evaluable u;
    u.dim = cc->dimension();
    u.name = std::move(name);
    u.value = [cc](const Point& x) { return synthesize(*cc, x); };
    u.gradient = [cc](const Point& x) {
        Point g;
        synthesize_with_gradient(*cc, x, g);
        return g;
    };
    return u;
}

/// Samples a spectral expansion on a grid and attaches every ladder word up to length k.
/// The outermost letter of each word is applied by a_deriv_eval to the expansion of the
/// remaining word, whose gradient is analytic, so the grids are exact up to rounding.
inline GridFunction grid_from_spectral(const SpectralCoeffs& c, double L, double h, int k) {
    const std::size_t n = c.dimension();
    GridFunction g(n, L, h);
    parallel_for(g.size(), [&](std::size_t p) { g[p] = synthesize(c, g.point(p)); });
    for (int m = 1; m <= k; ++m)
        for (const auto& w : ladder_words(n, m)) {
            const LadderWord rest(w.begin() + 1, w.end());
            const Evaluable inner = spectral_evaluable(ladder_word_apply(rest, c));
            GridFunction d(n, L, h);
            parallel_for(d.size(), [&](std::size_t p) { d[p] = a_deriv_eval(w[0], inner, d.point(p)); });
            g.attach(w, std::move(d));
        }
    return g;
}

}  // namespace hfrac
