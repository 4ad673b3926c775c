#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ponzi/dual.hpp"

namespace ponzi {

class ZeroVectorInput : public std::invalid_argument {
public:
    ZeroVectorInput() : std::invalid_argument("equiangular solve requires non-zero inputs") {}
};

class DegenerateGradient : public std::runtime_error {
public:
    explicit DegenerateGradient(const std::string& what) : std::runtime_error(what) {}
};

enum class RankFlag { Full, SpanDeficient, AllParallel };

// Intermediate vector forming equal angles with the three inputs, scaled to
// length l. For non-degenerate spans the three cosines agree to ~1e-15 by
// construction; v's sign makes cos(v, a+b+c) >= 0 (ties resolved to +).
struct EquiangularSolution {
    std::vector<double> v;
    double cosine = 0.0;
    RankFlag rank_flag = RankFlag::Full;
    int sign_choice = +1;
};

struct SimilarityGradient {
    std::vector<double> d_a, d_b, d_c;
};

// Three vectors in 3-space. The equal-cosine conditions reduce to two
// homogeneous rows over the unit directions; the null space (cross product
// at full rank) gives v's direction, and the spherical constraint fixes the
// scale to l. Throws ZeroVectorInput for inputs with norm < 1e-12.
EquiangularSolution solve_equiangular_r3(std::span<const double> a, std::span<const double> b,
                                         std::span<const double> c, double l);

// General dimension (>= 3): the inputs are orthonormalized to a basis of
// their span, the reduced problem is solved there, and v is mapped back, so
// v always lies in span{a, b, c} when an in-span solution exists. Span rank
// 1 gives v parallel to a; rank 2 with two distinct directions gives their
// bisector; rank 2 with three distinct coplanar directions has no in-span
// solution and falls back to a deterministic unit vector orthogonal to the
// span (all cosines zero).
EquiangularSolution solve_equiangular_span(std::span<const double> a, std::span<const double> b,
                                           std::span<const double> c, double l);

// The shared cosine of the equiangular solution; the multi-vector similarity.
// Scale-free in each argument; l is fixed internally to 1.
double multi_cosine(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c);

// Forward-mode derivative of multi_cosine in every input coordinate (one
// dual pass per coordinate). Throws DegenerateGradient unless the solve is
// full-rank within the span.
SimilarityGradient multi_cosine_grad(std::span<const double> a, std::span<const double> b,
                                     std::span<const double> c);

// ---------------------------------------------------------------------------
// Templated core, exposed for the dual-number passes and tests.
// ---------------------------------------------------------------------------

namespace detail {

template <typename T>
struct SolveResult {
    std::vector<T> v;
    T cosine{};
    RankFlag rank_flag = RankFlag::Full;
    int sign_choice = +1;
};

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    T acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <typename T>
T norm(const std::vector<T>& a) {
    using std::sqrt;
    using ponzi::sqrt;
    return sqrt(dot(a, a));
}

// Rank tolerance, relative to unit-vector magnitudes.
constexpr double kRankTol = 1e-10;

template <typename T>
SolveResult<T> solve_equiangular_impl(const std::vector<T>& a, const std::vector<T>& b,
                                      const std::vector<T>& c, const T& l) {
    using std::sqrt;
    using ponzi::sqrt;
    const std::size_t dim = a.size();

    T na = norm(a), nb = norm(b), nc = norm(c);
    if (value_of(na) < 1e-12 || value_of(nb) < 1e-12 || value_of(nc) < 1e-12)
        throw ZeroVectorInput();

    auto scaled = [&](const std::vector<T>& x, const T& inv) {
        std::vector<T> out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = x[i] * inv;
        return out;
    };
    std::vector<T> ua = scaled(a, T(1.0) / na);
    std::vector<T> ub = scaled(b, T(1.0) / nb);
    std::vector<T> uc = scaled(c, T(1.0) / nc);

    // Orthonormal basis of span{ua, ub, uc} by modified Gram-Schmidt.
    std::vector<std::vector<T>> basis;
    auto try_add = [&](const std::vector<T>& x) {
        std::vector<T> w = x;
        for (const auto& q : basis) {
            T proj = dot(w, q);
            for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * q[i];
        }
        T wn = norm(w);
        if (value_of(wn) <= kRankTol) return;
        T inv = T(1.0) / wn;
        for (auto& x_i : w) x_i *= inv;
        basis.push_back(std::move(w));
    };
    try_add(ua);
    try_add(ub);
    try_add(uc);
    const std::size_t rank = basis.size();

    auto coords = [&](const std::vector<T>& x) {
        std::vector<T> out(rank);
        for (std::size_t k = 0; k < rank; ++k) out[k] = dot(x, basis[k]);
        return out;
    };

    SolveResult<T> result;
    std::vector<T> dir(dim, T(0.0));  // unit direction of v
    auto from_coords = [&](const std::vector<T>& t) {
        std::vector<T> out(dim, T(0.0));
        for (std::size_t k = 0; k < t.size(); ++k)
            for (std::size_t i = 0; i < dim; ++i) out[i] += t[k] * basis[k][i];
        return out;
    };

    // Deterministic unit vector orthogonal to the span: take the standard
    // basis vector with the largest out-of-span residual and normalize it.
    auto orthogonal_completion = [&]() {
        std::size_t best = 0;
        double best_res = -1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double inside = 0.0;
            for (const auto& q : basis) inside += value_of(q[i]) * value_of(q[i]);
            double res = 1.0 - inside;
            if (res > best_res + 1e-15) {
                best_res = res;
                best = i;
            }
        }
        std::vector<T> w(dim, T(0.0));
        w[best] = T(1.0);
        for (const auto& q : basis) {
            T proj = dot(w, q);
            for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * q[i];
        }
        T inv = T(1.0) / norm(w);
        for (auto& x : w) x *= inv;
        return w;
    };

    if (rank == 1) {
        dir = ua;
        result.rank_flag = RankFlag::AllParallel;
    } else if (rank == 2) {
        std::vector<T> pa = coords(ua), pb = coords(ub), pc = coords(uc);
        // Equal-cosine rows over the unit directions.
        T row_a0 = pa[0] - pb[0], row_a1 = pa[1] - pb[1];
        T row_b0 = pb[0] - pc[0], row_b1 = pb[1] - pc[1];
        T det = row_a0 * row_b1 - row_a1 * row_b0;
        T norm_a = sqrt(row_a0 * row_a0 + row_a1 * row_a1);
        T norm_b = sqrt(row_b0 * row_b0 + row_b1 * row_b1);
        result.rank_flag = RankFlag::SpanDeficient;
        if (value_of(det) > -kRankTol && value_of(det) < kRankTol) {
            // Rank-1 row space: null direction is the in-plane perpendicular
            // of the stronger row (the bisector of the two distinct
            // directions, since all inputs are unit length).
            T r0, r1;
            if (value_of(norm_a) >= value_of(norm_b)) {
                r0 = row_a0;
                r1 = row_a1;
            } else {
                r0 = row_b0;
                r1 = row_b1;
            }
            std::vector<T> t = {T(0.0) - r1, r0};
            T inv = T(1.0) / sqrt(t[0] * t[0] + t[1] * t[1]);
            t[0] *= inv;
            t[1] *= inv;
            dir = from_coords(t);
        } else {
            // Three distinct coplanar directions: no in-span solution; the
            // orthogonal complement sees all three at ninety degrees.
            dir = orthogonal_completion();
        }
    } else {
        std::vector<T> pa = coords(ua), pb = coords(ub), pc = coords(uc);
        std::vector<T> row_a(3), row_b(3);
        for (int i = 0; i < 3; ++i) {
            row_a[static_cast<std::size_t>(i)] =
                pa[static_cast<std::size_t>(i)] - pb[static_cast<std::size_t>(i)];
            row_b[static_cast<std::size_t>(i)] =
                pb[static_cast<std::size_t>(i)] - pc[static_cast<std::size_t>(i)];
        }
        // Null space of the 2x3 system via the cross product.
        std::vector<T> t = {row_a[1] * row_b[2] - row_a[2] * row_b[1],
                            row_a[2] * row_b[0] - row_a[0] * row_b[2],
                            row_a[0] * row_b[1] - row_a[1] * row_b[0]};
        T tn = norm(t);
        if (value_of(tn) < 1e-14) {
            // Unreachable for a genuinely rank-3 span; numerical safety net.
            dir = orthogonal_completion();
            result.rank_flag = RankFlag::SpanDeficient;
        } else {
            T inv = T(1.0) / tn;
            for (auto& x : t) x *= inv;
            dir = from_coords(t);
            result.rank_flag = RankFlag::Full;
        }
    }

    // Sign: agreement with the input sum; exact ties stay positive.
    std::vector<T> sum(dim);
    for (std::size_t i = 0; i < dim; ++i) sum[i] = a[i] + b[i] + c[i];
    T s = dot(dir, sum);
    if (value_of(s) < 0.0) {
        for (auto& x : dir) x = T(0.0) - x;
        result.sign_choice = -1;
    }

    if (result.rank_flag == RankFlag::AllParallel) {
        result.cosine = dot(dir, ua);
    } else {
        result.cosine = (dot(dir, ua) + dot(dir, ub) + dot(dir, uc)) / T(3.0);
    }
    result.v.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) result.v[i] = dir[i] * l;
    return result;
}

}  // namespace detail

}  // namespace ponzi
