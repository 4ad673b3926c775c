// Test-side oracles. These deliberately re-derive expected values through
// routes independent of the library implementation they check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ponzi/rng.hpp"

namespace oracles {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(Vec a) {
    double n = norm(a);
    for (auto& x : a) x /= n;
    return a;
}

// ---------------------------------------------------------------------------
// Constrained-optimization similarity oracle: minimize the spread of the
// three cosines over the unit sphere restricted to span{a, b, c}, by
// projected gradient descent with backtracking line search and multi-start.
// Returns the common cosine after applying the same sign rule as the library
// (agreement with a + b + c). Only meaningful for non-degenerate triples.
// ---------------------------------------------------------------------------
struct SphereOracleResult {
    double cosine = 0.0;
    double objective = 0.0;  // final sum of squared cosine differences
    Vec v;                   // unit vector in the original dimension
};

inline SphereOracleResult equal_cosine_by_optimization(const Vec& a, const Vec& b, const Vec& c,
                                                       std::uint64_t seed = 1234) {
    const std::size_t dim = a.size();
    Vec ua = normalized(a), ub = normalized(b), uc = normalized(c);

    // Independent Gram-Schmidt over the raw inputs.
    std::vector<Vec> basis;
    for (const Vec* x : {&ua, &ub, &uc}) {
        Vec w = *x;
        for (const auto& q : basis) {
            double p = dot(w, q);
            for (std::size_t i = 0; i < dim; ++i) w[i] -= p * q[i];
        }
        double n = norm(w);
        if (n > 1e-10) {
            for (auto& y : w) y /= n;
            basis.push_back(std::move(w));
        }
    }
    const std::size_t r = basis.size();

    auto coords = [&](const Vec& x) {
        Vec t(r);
        for (std::size_t k = 0; k < r; ++k) t[k] = dot(x, basis[k]);
        return t;
    };
    Vec pa = coords(ua), pb = coords(ub), pc = coords(uc);

    auto objective = [&](const Vec& t) {
        double c1 = dot(pa, t), c2 = dot(pb, t), c3 = dot(pc, t);
        return (c1 - c2) * (c1 - c2) + (c2 - c3) * (c2 - c3) + (c1 - c3) * (c1 - c3);
    };
    auto gradient = [&](const Vec& t) {
        double c1 = dot(pa, t), c2 = dot(pb, t), c3 = dot(pc, t);
        Vec g(r, 0.0);
        auto add_pair = [&](double ci, double cj, const Vec& ui, const Vec& uj) {
            double w = 2.0 * (ci - cj);
            for (std::size_t k = 0; k < r; ++k) g[k] += w * (ui[k] - uj[k]);
        };
        add_pair(c1, c2, pa, pb);
        add_pair(c2, c3, pb, pc);
        add_pair(c1, c3, pa, pc);
        return g;
    };

    auto renorm = [](Vec t) {
        double n = norm(t);
        for (auto& x : t) x /= n;
        return t;
    };
    auto run_from = [&](Vec t) {
        t = renorm(std::move(t));
        double f = objective(t);
        for (int iter = 0; iter < 4000 && f > 1e-24; ++iter) {
            Vec g = gradient(t);
            double gt = dot(g, t);  // tangent projection
            for (std::size_t k = 0; k < r; ++k) g[k] -= gt * t[k];
            double step = 1.0;
            bool moved = false;
            for (int halving = 0; halving < 40; ++halving) {
                Vec trial(r);
                for (std::size_t k = 0; k < r; ++k) trial[k] = t[k] - step * g[k];
                trial = renorm(std::move(trial));
                double ft = objective(trial);
                if (ft < f) {
                    t = std::move(trial);
                    f = ft;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        return std::pair<double, Vec>(f, t);
    };

    Vec sum_start(r, 0.0);
    for (std::size_t k = 0; k < r; ++k) sum_start[k] = pa[k] + pb[k] + pc[k];
    if (norm(sum_start) < 1e-9) sum_start[0] = 1.0;

    auto best = run_from(sum_start);
    ponzi::Rng rng(seed);
    for (int s = 0; s < 6; ++s) {
        Vec t(r);
        for (auto& x : t) x = rng.next_gaussian();
        auto candidate = run_from(std::move(t));
        if (candidate.first < best.first) best = std::move(candidate);
    }

    SphereOracleResult out;
    out.objective = best.first;
    Vec t = best.second;
    // Same sign rule as the library: cosine agreement with a + b + c.
    Vec v(dim, 0.0);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < dim; ++i) v[i] += t[k] * basis[k][i];
    Vec s(dim);
    for (std::size_t i = 0; i < dim; ++i) s[i] = a[i] + b[i] + c[i];
    if (dot(v, s) < 0.0)
        for (auto& x : v) x = -x;
    out.v = v;
    out.cosine = (dot(v, ua) + dot(v, ub) + dot(v, uc)) / 3.0;
    return out;
}

// ---------------------------------------------------------------------------
// Central finite differences.
// ---------------------------------------------------------------------------
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative_error(double got, double want) {
    double scale = std::max(std::abs(got), std::abs(want));
    if (scale < 1e-12) return std::abs(got - want);
    return std::abs(got - want) / scale;
}

}  // namespace oracles
