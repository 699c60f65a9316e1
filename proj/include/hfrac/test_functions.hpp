#pragma once

// Named test functions with analytic gradients.
//   hermite:k[,k2,k3]   product Hermite function h_nu
//   gauss:c,w           exp(-|x - c e1|^2 / (2 w^2))
//   modgauss:c,w,f      gauss:c,w times cos(f (x1 - c))
//   bump:c,w            exp(1 - 1/(1 - |x - c e1|^2/w^2)) inside the ball, 0 outside

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/function.hpp"
#include "hfrac/hermite_basis.hpp"

namespace hfrac {

inline Evaluable hermite_function(const MultiIndex& nu) {
    Evaluable u;
    u.dim = nu.dim();
    u.name = "hermite:" + nu.str();
    u.value = [nu](const Point& x) { return eval_multi(nu, x); };
    u.gradient = [nu](const Point& x) {
        const std::size_t n = nu.dim();
        std::vector<double> v(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = hermite_eval_1d(nu[i], x[i]);
            d[i] = hermite_deriv_1d(nu[i], x[i]);
        }
        Point g(n);
        for (std::size_t i = 0; i < n; ++i) {
            double p = d[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) p *= v[j];
            g[i] = p;
        }
        return g;
    };
    return u;
}

inline Evaluable gaussian(Point center, double w, double freq = 0.0) {
    require(w > 0, "gaussian: width must be > 0");
    Evaluable u;
    u.dim = center.size();
    u.value = [center, w, freq](const Point& x) {
        require_dim(x.size(), center.size(), "gaussian");
        double r2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        double g = std::exp(-r2 / (2 * w * w));
        return freq == 0.0 ? g : g * std::cos(freq * (x[0] - center[0]));
    };
    u.gradient = [center, w, freq](const Point& x) {
        double r2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        const double g = std::exp(-r2 / (2 * w * w));
        const double c = freq == 0.0 ? 1.0 : std::cos(freq * (x[0] - center[0]));
        Point grad(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) grad[i] = -(x[i] - center[i]) / (w * w) * g * c;
        if (freq != 0.0) grad[0] -= g * freq * std::sin(freq * (x[0] - center[0]));
        return grad;
    };
    return u;
}

inline Evaluable smooth_bump(Point center, double w) {
    require(w > 0, "smooth_bump: width must be > 0");
    Evaluable u;
    u.dim = center.size();
    auto r2of = [center, w](const Point& x) {
        double r2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        return r2 / (w * w);
    };
    u.value = [r2of](const Point& x) {
        double q = r2of(x);
        return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
    };
    u.gradient = [r2of, center, w](const Point& x) {
        double q = r2of(x);
        Point g(x.size(), 0.0);
        if (q >= 1.0) return g;
        double e = std::exp(1.0 - 1.0 / (1.0 - q));
        double dq = -e / ((1.0 - q) * (1.0 - q));  // d/dq
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = dq * 2.0 * (x[i] - center[i]) / (w * w);
        return g;
    };
    return u;
}

namespace detail {
inline std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw PreconditionError("bad number '" + tok + "' in function spec " + what);
        }
    }
    return out;
}
}  // namespace detail

/// Builds a named function in dimension n; shorthand "h2" means hermite:2.
inline Evaluable make_function(const std::string& spec, std::size_t n) {
    require(n >= 1 && n <= 3, "make_function: dimension must be 1, 2 or 3");
    std::string fam = spec, args;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        fam = spec.substr(0, colon);
        args = spec.substr(colon + 1);
    } else if (spec.size() > 1 && spec[0] == 'h' && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
        fam = "hermite";
        args = spec.substr(1);
    }
    auto nums = detail::parse_numbers(args, spec);
    Point center(n, 0.0);
    Evaluable u;
    if (fam == "hermite") {
        require(!nums.empty() && nums.size() <= n, "hermite spec needs 1..n degrees: " + spec);
        std::vector<int> comps(n, 0);
        for (std::size_t i = 0; i < nums.size(); ++i) {
            require(nums[i] >= 0 && nums[i] == std::floor(nums[i]), "hermite degrees must be nonnegative integers");
            comps[i] = int(nums[i]);
        }
        u = hermite_function(MultiIndex(comps));
    } else if (fam == "gauss") {
        require(nums.size() == 2, "gauss spec is gauss:c,w");
        center[0] = nums[0];
        u = gaussian(center, nums[1]);
    } else if (fam == "modgauss") {
        require(nums.size() == 3, "modgauss spec is modgauss:c,w,f");
        center[0] = nums[0];
        u = gaussian(center, nums[1], nums[2]);
    } else if (fam == "bump") {
        require(nums.size() == 2, "bump spec is bump:c,w");
        center[0] = nums[0];
        u = smooth_bump(center, nums[1]);
    } else {
        throw PreconditionError("unknown function family '" + fam + "'");
    }
    u.name = spec;
    return u;
}

/// Six Schwartz functions: Hermite functions, Gaussians and modulated Gaussians.
inline std::vector<std::string> schwartz_suite_names(std::size_t n) {
    if (n == 1) return {"hermite:1", "hermite:4", "gauss:0,1", "gauss:0.5,0.7", "modgauss:0,1,2", "modgauss:-0.3,0.8,1.5"};
    return {"hermite:1,0", "hermite:2,1", "gauss:0,1", "gauss:0.5,0.7", "modgauss:0,1,2", "modgauss:-0.3,0.8,1.5"};
}

inline std::vector<Evaluable> schwartz_suite(std::size_t n) {
    std::vector<Evaluable> out;
    for (const auto& s : schwartz_suite_names(n)) out.push_back(make_function(s, n));
    return out;
}

}  // namespace hfrac
