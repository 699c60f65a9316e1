#pragma once

// Gauss-Legendre panels and the graded rule for integrals over s in (0,1)
// against d mu_rho(s) = ds / ((1 - s^2) atanh(s)^{1+rho}).

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hfrac/errors.hpp"

namespace hfrac {

struct GaussLegendre {
    std::vector<double> x;  // on (-1, 1)
    std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int q) {
    require(q >= 1, "gauss_legendre: q must be >= 1");
    GaussLegendre g;
    g.x.resize(static_cast<std::size_t>(q));
    g.w.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < q; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            dp = q * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < q; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            dp = q * (z * p0 - p1) / (z * z - 1.0);
        }
        auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(q - 1 - i);
        g.x[a] = -z;
        g.x[b] = z;
        g.w[a] = g.w[b] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return g;
}

/// Composite Gauss-Legendre nodes on the panels [edges[k], edges[k+1]].
inline void composite_nodes(const std::vector<double>& edges, const GaussLegendre& g, std::vector<double>& x,
                            std::vector<double>& w) {
    x.clear();
    w.clear();
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double a = edges[k], b = edges[k + 1], c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            x.push_back(c + h * g.x[i]);
            w.push_back(h * g.w[i]);
        }
    }
}

/// Mesh parameters for all graded quadratures.
struct QuadratureSpec {
    int panels = 400;         // cap on panels of one s-integral
    int grade_zero = 1;       // geometric panels per octave towards s = 0
    int grade_one = 1;        // refinement factor of the t-panels covering s in (1/2, 1)
    int gl_order = 10;        // Gauss-Legendre points per panel
    int octaves = 64;         // lower region reaches s = 2^{-octaves-1}
    double t_max = 40.0;      // upper truncation in t
    double tolerance = 1e-10;
    double pv_delta = 1e-3;
    double pv_tolerance = 1e-7;
    double box = 12.0;        // radial truncation of spatial integrals (L_out)
    double grid_step = 0.25;
    int directions = 64;      // angular nodes for n = 2 (azimuth count for n = 3)
    int polar_nodes = 16;     // Gauss-Legendre nodes in cos(theta) for n = 3

    void validate() const {
        require(pv_delta > 0, "QuadratureSpec: pv_delta must be > 0");
        require(panels >= 16, "QuadratureSpec: panels must be >= 16");
        require(box >= 3, "QuadratureSpec: box must be >= 3");
        require(grid_step > 0, "QuadratureSpec: grid_step must be > 0");
        require(grade_zero >= 1 && grade_one >= 1, "QuadratureSpec: grading factors must be >= 1");
        require(gl_order >= 2, "QuadratureSpec: gl_order must be >= 2");
        require(octaves >= 8, "QuadratureSpec: octaves must be >= 8");
        require(directions >= 4 && directions % 2 == 0, "QuadratureSpec: directions must be even and >= 4");
        require(polar_nodes >= 2, "QuadratureSpec: polar_nodes must be >= 2");
        require(t_max > 2, "QuadratureSpec: t_max must be > 2");
    }
};

/// Density of d mu_rho with respect to ds.
inline double mu_density_unchecked(double s, double rho) {
    return 1.0 / ((1.0 - s) * (1.0 + s) * std::pow(std::atanh(s), 1.0 + rho));
}

struct SNode {
    double s;      // tanh t
    double inv_s;  // 1/s
    double t;      // atanh s
    double w;      // quadrature weight including the mu_rho density
};

/// Quadrature for the integral over (0,1) of g(s) d mu_rho(s).
/// Lower region (0,1/2): geometric panels in s; upper region: panels in t = atanh(s),
/// where d mu_rho = dt / t^{1+rho}.
class SMeasureRule {
public:
    SMeasureRule(double rho, const QuadratureSpec& spec) : rho_(rho) {
        spec.validate();
        const GaussLegendre g = gauss_legendre(spec.gl_order);
        const int lower_panels = spec.octaves * spec.grade_zero;
        std::vector<double> t_edges = {std::atanh(0.5), 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.5,
                                       8.0,             10., 13., 16., 20., 25., 32., 40.};
        while (t_edges.back() > spec.t_max + 1e-12) t_edges.pop_back();
        if (t_edges.back() < spec.t_max) t_edges.push_back(spec.t_max);
        std::vector<double> refined;
        for (std::size_t k = 0; k + 1 < t_edges.size(); ++k)
            for (int j = 0; j < spec.grade_one; ++j)
                refined.push_back(t_edges[k] + (t_edges[k + 1] - t_edges[k]) * j / spec.grade_one);
        refined.push_back(t_edges.back());
        const int upper_panels = static_cast<int>(refined.size()) - 1;
        if (lower_panels + upper_panels > spec.panels)
            throw PreconditionError("SMeasureRule: mesh needs " + std::to_string(lower_panels + upper_panels) +
                                    " panels, budget is " + std::to_string(spec.panels));
        // Lower region, stored from s = 1/2 downwards.
        const double ratio = std::pow(2.0, -1.0 / spec.grade_zero);
        double b = 0.5;
        for (int p = 0; p < lower_panels; ++p) {
            double a = b * ratio, c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (std::size_t i = g.x.size(); i-- > 0;) {
                double s = c + h * g.x[i];
                lower_.push_back({s, 1.0 / s, std::atanh(s), h * g.w[i] * mu_density_unchecked(s, rho)});
            }
            b = a;
        }
        eps_ = b;
        for (int p = 0; p < upper_panels; ++p) {
            double a = refined[static_cast<std::size_t>(p)], bb = refined[static_cast<std::size_t>(p) + 1];
            double c = 0.5 * (a + bb), h = 0.5 * (bb - a);
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                double t = c + h * g.x[i];
                double s = std::tanh(t);
                upper_.push_back({s, 1.0 / s, t, h * g.w[i] * std::pow(t, -1.0 - rho)});
            }
        }
        t_half_ = std::atanh(0.5);
    }

    double rho() const { return rho_; }
    const std::vector<SNode>& lower() const { return lower_; }  // decreasing s
    const std::vector<SNode>& upper() const { return upper_; }  // increasing t
    double endpoint() const { return eps_; }
    double t_half() const { return t_half_; }

    /// Sum of w g over the nodes; nodes below s_cut are skipped. If beta is finite the
    /// cell (0, endpoint) is added assuming g(s) mu_rho'(s) ~ phi(s) s^{beta-1} there.
    template <class G>
    double integrate(G&& g, double beta = std::numeric_limits<double>::quiet_NaN(), double s_cut = 0.0) const {
        double sum = 0.0;
        for (const auto& nd : upper_) sum += nd.w * g(nd);
        for (const auto& nd : lower_) {
            if (nd.s < s_cut) break;
            sum += nd.w * g(nd);
        }
        if (std::isfinite(beta) && s_cut <= eps_) sum += endpoint_cell(g, beta);
        return sum;
    }

    template <class G>
    double endpoint_cell(G&& g, double beta) const {
        double sb = eps_ * beta / (beta + 1.0);
        SNode nd{sb, 1.0 / sb, std::atanh(sb), 0.0};
        double dens = mu_density_unchecked(sb, rho_);
        return g(nd) * dens * std::pow(sb, 1.0 - beta) * std::pow(eps_, beta) / beta;
    }

private:
    double rho_;
    double eps_ = 0.0;
    double t_half_ = 0.0;
    std::vector<SNode> lower_;
    std::vector<SNode> upper_;
};

}  // namespace hfrac
