#include "ponzi/equiangle.hpp"

namespace ponzi {

namespace {

EquiangularSolution to_solution(detail::SolveResult<double>&& r) {
    EquiangularSolution s;
    s.v = std::move(r.v);
    s.cosine = r.cosine;
    s.rank_flag = r.rank_flag;
    s.sign_choice = r.sign_choice;
    return s;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

EquiangularSolution solve_equiangular_r3(std::span<const double> a, std::span<const double> b,
                                         std::span<const double> c, double l) {
    if (a.size() != 3 || b.size() != 3 || c.size() != 3)
        throw std::invalid_argument("solve_equiangular_r3 expects 3-vectors");
    return to_solution(detail::solve_equiangular_impl(to_vec(a), to_vec(b), to_vec(c), l));
}

EquiangularSolution solve_equiangular_span(std::span<const double> a, std::span<const double> b,
                                           std::span<const double> c, double l) {
    if (a.size() < 3 || a.size() != b.size() || a.size() != c.size())
        throw std::invalid_argument("solve_equiangular_span expects equal dimensions >= 3");
    return to_solution(detail::solve_equiangular_impl(to_vec(a), to_vec(b), to_vec(c), l));
}

double multi_cosine(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c) {
    return detail::solve_equiangular_impl(to_vec(a), to_vec(b), to_vec(c), 1.0).cosine;
}

SimilarityGradient multi_cosine_grad(std::span<const double> a, std::span<const double> b,
                                     std::span<const double> c) {
    // Rank check on a plain pass before paying for the dual passes.
    auto probe = detail::solve_equiangular_impl(to_vec(a), to_vec(b), to_vec(c), 1.0);
    if (probe.rank_flag != RankFlag::Full)
        throw DegenerateGradient("multi_cosine gradient undefined off the full-rank manifold");

    const std::size_t dim = a.size();
    std::vector<Dual> da(dim), db(dim), dc(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        da[i] = Dual(a[i]);
        db[i] = Dual(b[i]);
        dc[i] = Dual(c[i]);
    }

    SimilarityGradient g;
    g.d_a.resize(dim);
    g.d_b.resize(dim);
    g.d_c.resize(dim);
    auto seeded = [&](std::vector<Dual>& target, std::size_t i, std::vector<double>& out) {
        target[i].d = 1.0;
        auto r = detail::solve_equiangular_impl(da, db, dc, Dual(1.0));
        target[i].d = 0.0;
        out[i] = r.cosine.d;
    };
    for (std::size_t i = 0; i < dim; ++i) seeded(da, i, g.d_a);
    for (std::size_t i = 0; i < dim; ++i) seeded(db, i, g.d_b);
    for (std::size_t i = 0; i < dim; ++i) seeded(dc, i, g.d_c);
    return g;
}

}  // namespace ponzi
