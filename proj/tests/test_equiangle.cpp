#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ponzi/equiangle.hpp"
#include "ponzi/rng.hpp"

using namespace ponzi;
using oracles::Vec;

namespace {

Vec random_unit3(Rng& rng) {
    Vec v(3);
    for (auto& x : v) x = rng.next_gaussian();
    return oracles::normalized(std::move(v));
}

double det3(const Vec& a, const Vec& b, const Vec& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Random well-conditioned triple in R^3 (regenerates near-coplanar draws).
void random_triple3(Rng& rng, Vec& a, Vec& b, Vec& c) {
    for (;;) {
        a = random_unit3(rng);
        b = random_unit3(rng);
        c = random_unit3(rng);
        double scale_a = 0.2 + 3.0 * rng.next_double();
        double scale_b = 0.2 + 3.0 * rng.next_double();
        double scale_c = 0.2 + 3.0 * rng.next_double();
        for (auto& x : a) x *= scale_a;
        for (auto& x : b) x *= scale_b;
        for (auto& x : c) x *= scale_c;
        if (std::abs(det3(oracles::normalized(a), oracles::normalized(b),
                          oracles::normalized(c))) > 0.05)
            return;
    }
}

double cosine_to(const Vec& v, const Vec& x) {
    return oracles::dot(v, x) / (oracles::norm(v) * oracles::norm(x));
}

double equal_cosine_residual(const EquiangularSolution& sol, const Vec& a, const Vec& b,
                             const Vec& c) {
    double c1 = cosine_to(sol.v, a), c2 = cosine_to(sol.v, b), c3 = cosine_to(sol.v, c);
    return std::max({std::abs(c1 - c2), std::abs(c2 - c3), std::abs(c1 - c3)});
}

}  // namespace

TEST_CASE("parallel triple: v along the common direction, cosine 1, AllParallel") {
    Vec a = {2, 0, 0};
    auto sol = solve_equiangular_r3(a, a, a, 3.0);
    CHECK(sol.rank_flag == RankFlag::AllParallel);
    CHECK(sol.cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.v[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(sol.v[1]) < 1e-12);
    CHECK(std::abs(sol.v[2]) < 1e-12);
}

TEST_CASE("orthonormal triple: v = (1,1,1)/sqrt(3), cosine 1/sqrt(3)") {
    Vec a = {1, 0, 0}, b = {0, 1, 0}, c = {0, 0, 1};
    auto sol = solve_equiangular_r3(a, b, c, 1.0);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    CHECK(sol.rank_flag == RankFlag::Full);
    CHECK(sol.cosine == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    for (int i = 0; i < 3; ++i)
        CHECK(sol.v[static_cast<std::size_t>(i)] == doctest::Approx(inv_sqrt3).epsilon(1e-12));
}

TEST_CASE("spec triple matches the constrained-optimization oracle") {
    Vec a = {1, 0, 0};
    Vec b = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0};
    Vec c = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
    auto sol = solve_equiangular_r3(a, b, c, 1.0);
    auto oracle = oracles::equal_cosine_by_optimization(a, b, c);
    REQUIRE(oracle.objective < 1e-20);
    CHECK(std::abs(sol.cosine - oracle.cosine) < 1e-8);
    CHECK(equal_cosine_residual(sol, a, b, c) < 1e-9);
}

TEST_CASE("norm constraint and equal cosines over random R3 triples") {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        Vec a, b, c;
        random_triple3(rng, a, b, c);
        double l = 0.5 + 2.0 * rng.next_double();
        auto sol = solve_equiangular_r3(a, b, c, l);
        CHECK(sol.rank_flag == RankFlag::Full);
        CHECK(std::abs(oracles::norm(sol.v) - l) < 1e-9 * l);
        CHECK(equal_cosine_residual(sol, a, b, c) < 1e-9);
    }
}

TEST_CASE("zero-padded embedding reproduces the R3 solution") {
    const std::size_t d = 32;
    Vec a(d, 0.0), b(d, 0.0), c(d, 0.0);
    a[0] = 1.0;
    b[1] = 1.0;
    c[2] = 1.0;
    auto sol = solve_equiangular_span(a, b, c, 1.0);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    CHECK(sol.cosine == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(sol.v[i] == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    for (std::size_t i = 3; i < d; ++i) CHECK(std::abs(sol.v[i]) < 1e-12);
}

TEST_CASE("rank-2 span: a = b != c reduces to the bisector") {
    Vec a = {1, 0, 0, 0}, c = {0, 1, 0, 0};
    auto sol = solve_equiangular_span(a, a, c, 1.0);
    CHECK(sol.rank_flag == RankFlag::SpanDeficient);
    CHECK(cosine_to(sol.v, a) == doctest::Approx(cosine_to(sol.v, c)).epsilon(1e-12));
    // Bisector of two orthonormal directions: cosine 1/sqrt(2).
    CHECK(sol.cosine == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("random span triples in d=32: residuals, containment, oracle agreement") {
    Rng rng(77);
    const std::size_t d = 32;
    for (int trial = 0; trial < 200; ++trial) {
        Vec a(d), b(d), c(d);
        for (auto& x : a) x = rng.next_gaussian();
        for (auto& x : b) x = rng.next_gaussian();
        for (auto& x : c) x = rng.next_gaussian();
        auto sol = solve_equiangular_span(a, b, c, 1.0);
        REQUIRE(sol.rank_flag == RankFlag::Full);
        CHECK(equal_cosine_residual(sol, a, b, c) < 1e-9);
        CHECK(std::abs(oracles::norm(sol.v) - 1.0) < 1e-9);

        // Span containment: project v onto span{a,b,c} and compare.
        std::vector<Vec> basis;
        for (const Vec* x : {&a, &b, &c}) {
            Vec w = oracles::normalized(*x);
            for (const auto& q : basis) {
                double p = oracles::dot(w, q);
                for (std::size_t i = 0; i < d; ++i) w[i] -= p * q[i];
            }
            double n = oracles::norm(w);
            if (n > 1e-10) {
                for (auto& y : w) y /= n;
                basis.push_back(std::move(w));
            }
        }
        Vec projected(d, 0.0);
        for (const auto& q : basis) {
            double p = oracles::dot(sol.v, q);
            for (std::size_t i = 0; i < d; ++i) projected[i] += p * q[i];
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            residual += (projected[i] - sol.v[i]) * (projected[i] - sol.v[i]);
        CHECK(std::sqrt(residual) < 1e-9);

        if (trial < 50) {
            auto oracle = oracles::equal_cosine_by_optimization(a, b, c);
            REQUIRE(oracle.objective < 1e-20);
            CHECK(std::abs(sol.cosine - oracle.cosine) < 1e-8);
        }
    }
}

TEST_CASE("multi_cosine basics") {
    Vec a = {0.3, -1.2, 0.5};
    CHECK(multi_cosine(a, a, a) == doctest::Approx(1.0).epsilon(1e-12));

    Vec e1 = {1, 0, 0}, e2 = {0, 1, 0}, e3 = {0, 0, 1};
    CHECK(multi_cosine(e1, e2, e3) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("multi_cosine is invariant under positive rescaling of any argument") {
    Rng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        Vec a, b, c;
        random_triple3(rng, a, b, c);
        double base = multi_cosine(a, b, c);
        Vec a2 = a, b2 = b, c2 = c;
        for (auto& x : a2) x *= 2.0;
        for (auto& x : b2) x *= 0.125;
        for (auto& x : c2) x *= 7.5;
        CHECK(std::abs(multi_cosine(a2, b, c) - base) < 1e-12);
        CHECK(std::abs(multi_cosine(a, b2, c) - base) < 1e-12);
        CHECK(std::abs(multi_cosine(a, b, c2) - base) < 1e-12);
        CHECK(base >= 0.0);
        CHECK(base <= 1.0 + 1e-15);
    }
}

TEST_CASE("zero input is rejected") {
    Vec zero = {0, 0, 0}, a = {1, 0, 0};
    CHECK_THROWS_AS(solve_equiangular_r3(zero, a, a, 1.0), ZeroVectorInput);
    CHECK_THROWS_AS(multi_cosine(a, zero, a), ZeroVectorInput);
}

TEST_CASE("gradient: scale directions are flat and symmetry mirrors components") {
    Vec a = {1, 0, 0}, b = {0, 1, 0}, c = {0, 0, 1};
    auto g = multi_cosine_grad(a, b, c);
    // Scale invariance forces zero derivative along each input's own
    // direction.
    CHECK(std::abs(oracles::dot(g.d_a, a)) < 1e-10);
    CHECK(std::abs(oracles::dot(g.d_b, b)) < 1e-10);
    CHECK(std::abs(oracles::dot(g.d_c, c)) < 1e-10);
    // Three-fold symmetry: the cross components mirror one another.
    CHECK(g.d_a[1] == doctest::Approx(g.d_b[2]).epsilon(1e-10));
    CHECK(g.d_b[2] == doctest::Approx(g.d_c[0]).epsilon(1e-10));
}

TEST_CASE("gradient matches central finite differences on random triples") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        Vec a, b, c;
        random_triple3(rng, a, b, c);
        auto g = multi_cosine_grad(a, b, c);
        auto check_block = [&](Vec& target, const std::vector<double>& got) {
            for (std::size_t i = 0; i < 3; ++i) {
                double h = 1e-6 * oracles::norm(target);
                double saved = target[i];
                target[i] = saved + h;
                double up = multi_cosine(a, b, c);
                target[i] = saved - h;
                double down = multi_cosine(a, b, c);
                target[i] = saved;
                double fd = (up - down) / (2.0 * h);
                double denom = std::max({std::abs(fd), std::abs(got[i]), 1e-4});
                CHECK(std::abs(fd - got[i]) / denom < 1e-5);
            }
        };
        check_block(a, g.d_a);
        check_block(b, g.d_b);
        check_block(c, g.d_c);
    }
}

TEST_CASE("gradient is flagged degenerate off the full-rank manifold") {
    Vec a = {1, 0, 0}, c = {0, 1, 0};
    CHECK_THROWS_AS(multi_cosine_grad(a, a, c), DegenerateGradient);
    Vec near_a = {1.0 + 1e-13, 1e-13, 0};
    CHECK_THROWS_AS(multi_cosine_grad(a, near_a, c), DegenerateGradient);
    // No silent NaN on the boundary: multi_cosine itself stays finite.
    CHECK(std::isfinite(multi_cosine(a, near_a, c)));
}
