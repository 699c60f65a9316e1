#pragma once

#include <functional>
#include <string>

#include "hfrac/errors.hpp"
#include "hfrac/hermite_basis.hpp"

namespace hfrac {

/// Smoothness order used for C-infinity data.
constexpr int kSmooth = 1000;

/// A function on R^n with optional analytic gradient and declared Hermite-Holder
/// regularity: u in C^{k,alpha}_H.
struct Evaluable {
    std::size_t dim = 1;
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;
    int k = kSmooth;
    double alpha = 1.0;
    std::string name;

    double operator()(const Point& x) const { return value(x); }
    bool has_gradient() const { return static_cast<bool>(gradient); }
    bool smooth() const { return k >= 2; }
};

/// Central-difference gradient.
inline Point central_gradient(const Evaluable& u, const Point& x, double h) {
    Point g(x.size()), y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] + h;
        double up = u(y);
        y[i] = x[i] - h;
        double dn = u(y);
        y[i] = x[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

}  // namespace hfrac
