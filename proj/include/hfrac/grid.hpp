#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hfrac/errors.hpp"
#include "hfrac/hermite_basis.hpp"

namespace hfrac {

/// Signed ladder word: +i is A_i, -i is A_{-i}, applied right to left (word {a, b} means A_a A_b u).
using LadderWord = std::vector<int>;

inline std::string word_str(const LadderWord& w) {
    std::string s;
    for (int i : w) s += (s.empty() ? "A" : " A") + std::to_string(i);
    return s.empty() ? "id" : s;
}

/// Samples on the tensor grid {-L + i h}^n, last axis fastest.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(std::size_t n, double L, double h) : n_(n), L_(L), h_(h) {
        require(n >= 1 && n <= 3, "GridFunction: dimension must be 1, 2 or 3");
        require(L > 0 && h > 0, "GridFunction: L and h must be positive");
        double steps = 2.0 * L / h;
        long r = std::lround(steps);
        require(std::abs(steps - double(r)) < 1e-9 * std::max(1.0, steps), "GridFunction: 2L/h must be an integer");
        m_ = static_cast<std::size_t>(r) + 1;
        std::size_t total = 1;
        for (std::size_t d = 0; d < n; ++d) total *= m_;
        values_.assign(total, 0.0);
    }

    static GridFunction sample(std::size_t n, double L, double h, const std::function<double(const Point&)>& f) {
        GridFunction g(n, L, h);
        for (std::size_t i = 0; i < g.size(); ++i) g.values_[i] = f(g.point(i));
        return g;
    }

    std::size_t dim() const { return n_; }
    double half_width() const { return L_; }
    double step() const { return h_; }
    std::size_t per_axis() const { return m_; }
    std::size_t size() const { return values_.size(); }
    double coord(std::size_t i) const { return -L_ + h_ * double(i); }

    std::vector<std::size_t> multi(std::size_t flat) const {
        std::vector<std::size_t> idx(n_);
        for (std::size_t d = n_; d-- > 0;) {
            idx[d] = flat % m_;
            flat /= m_;
        }
        return idx;
    }
    Point point(std::size_t flat) const {
        Point p(n_);
        for (std::size_t d = n_; d-- > 0;) {
            p[d] = coord(flat % m_);
            flat /= m_;
        }
        return p;
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool same_geometry(const GridFunction& o) const {
        return n_ == o.n_ && m_ == o.m_ && std::abs(L_ - o.L_) < 1e-12 && std::abs(h_ - o.h_) < 1e-12;
    }

    void attach(const LadderWord& w, GridFunction g) {
        require(same_geometry(g), "GridFunction::attach: derivative grid geometry differs");
        derivs_[w] = std::move(g.values_);
    }
    bool has(const LadderWord& w) const { return w.empty() || derivs_.count(w) > 0; }
    GridFunction derivative(const LadderWord& w) const {
        if (w.empty()) return without_derivatives();
        auto it = derivs_.find(w);
        if (it == derivs_.end()) throw PreconditionError("GridFunction: missing derivative grid " + word_str(w));
        GridFunction g(n_, L_, h_);
        g.values_ = it->second;
        return g;
    }
    GridFunction without_derivatives() const {
        GridFunction g = *this;
        g.derivs_.clear();
        return g;
    }
    const std::map<LadderWord, std::vector<double>>& derivative_grids() const { return derivs_; }

    GridFunction scaled(double a) const {
        GridFunction g = *this;
        for (auto& v : g.values_) v *= a;
        for (auto& [w, vals] : g.derivs_)
            for (auto& v : vals) v *= a;
        return g;
    }

private:
    std::size_t n_ = 1;
    double L_ = 1, h_ = 1;
    std::size_t m_ = 0;
    std::vector<double> values_;
    std::map<LadderWord, std::vector<double>> derivs_;
};

}  // namespace hfrac
