#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "fixtures.hpp"
#include "minsum/analysis.hpp"
#include "minsum/errors.hpp"
#include "minsum/walksum.hpp"

using namespace minsum;

namespace {

Eigen::MatrixXd dense_R(const QuadraticProblem& p) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(p.n, p.n);
    for (int k = 0; k < p.edge_count(); ++k) {
        auto [i, j] = p.edges[k];
        r(i, j) = -p.coupling[2 * k];
        r(j, i) = -p.coupling[2 * k];
    }
    return r;
}

}  // namespace

TEST_CASE("rho_weight") {
    auto c3 = testutil::cycle3();
    CHECK(rho_weight(c3, Walk{{1}}) == 1.0);
    CHECK(rho_weight(c3, Walk{{0, 1, 2}}) == doctest::Approx(0.16).epsilon(1e-14));

    auto e2 = testutil::edge2();
    CHECK(rho_weight(e2, Walk{{0, 1, 0}}) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(rho_weight(testutil::path3(), Walk{{0, 2}}), InvalidWalkError);
    CHECK_THROWS_AS(rho_weight(c3, Walk{{}}), InvalidWalkError);
}

TEST_CASE("nu_weight") {
    auto c3 = testutil::cycle3();
    Vec gs = compute_gamma_star(c3).gamma_star;
    CHECK(nu_weight(c3, gs, Walk{{2}}) == 1.0);
    CHECK(nu_weight(c3, gs, Walk{{0, 1, 2}}) == doctest::Approx(0.25).epsilon(1e-9));

    auto p3 = testutil::path3();
    Vec gsp = compute_gamma_star(p3).gamma_star;
    // (1 * 0.5) * (4/3 * 0.5) = 1/3
    CHECK(nu_weight(p3, gsp, Walk{{0, 1, 2}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(nu_weight(p3, gsp, Walk{{0, 1, 0}}), BacktrackingWalkError);
}

TEST_CASE("enumerate_walks frozen sets") {
    auto p3 = testutil::path3();
    auto nb = enumerate_walks(p3, 0, 2, 2, true);
    REQUIRE(nb.size() == 1);
    CHECK(nb[0].vertices == std::vector<int>{0, 1, 2});

    auto e2 = testutil::edge2();
    auto all = enumerate_walks(e2, 0, 0, 4, false);
    REQUIRE(all.size() == 3);
    CHECK(all[0].vertices == std::vector<int>{0});
    CHECK(all[1].vertices == std::vector<int>{0, 1, 0});
    CHECK(all[2].vertices == std::vector<int>{0, 1, 0, 1, 0});

    auto c3 = testutil::cycle3();
    auto loops = enumerate_walks(c3, 0, 0, 3, true);
    REQUIRE(loops.size() == 3);
    CHECK(loops[0].vertices == std::vector<int>{0});
    CHECK(loops[1].vertices == std::vector<int>{0, 1, 2, 0});
    CHECK(loops[2].vertices == std::vector<int>{0, 2, 1, 0});

    CHECK_THROWS_AS(enumerate_walks(c3, 0, 0, 30, false, 1000),
                    EnumerationBudgetExceededError);
}

TEST_CASE("count_walks matches enumeration") {
    auto p = testutil::generated(7, GraphModel::Erdos, 0.5, SignMode::Mixed, 41);
    for (int i = 0; i < p.n; i += 2)
        for (int j = 0; j < p.n; j += 3) {
            for (bool nb : {false, true}) {
                auto counts = count_walks(p, i, j, 5, nb);
                auto walks = enumerate_walks(p, i, j, 5, nb);
                std::vector<double> by_len(6, 0.0);
                for (const Walk& w : walks) by_len[w.length()] += 1.0;
                CHECK(by_len == counts);
            }
        }
}

TEST_CASE("matrix power identity: length-t walk weights sum to [R^t]_ij") {
    for (const auto& p : {testutil::path3(), testutil::cycle3(),
                          testutil::generated(9, GraphModel::Grid, 0.7, SignMode::Mixed, 6),
                          testutil::generated(10, GraphModel::Erdos, 0.6, SignMode::Mixed, 8)}) {
        Eigen::MatrixXd r = dense_R(p);
        Eigen::MatrixXd rt = Eigen::MatrixXd::Identity(p.n, p.n);
        for (int t = 0; t <= 6; ++t) {
            for (int i = 0; i < p.n; ++i)
                for (int j = 0; j < p.n; ++j) {
                    double sum = 0.0;
                    for (const Walk& w : enumerate_walks(p, i, j, t, false))
                        if (w.length() == t) sum += rho_weight(p, w);
                    CHECK(std::fabs(sum - rt(i, j)) <= 1e-12);
                }
            rt = rt * r;
        }
    }
}

TEST_CASE("truncated_series_solution") {
    auto c3 = testutil::cycle3();
    SeriesSolution t0 = truncated_series_solution(c3, 0);
    CHECK(t0.x == c3.h);

    // pick T so the geometric tail is below 1e-9, then compare to the oracle
    int T = 0;
    while (std::pow(0.8, T + 1) / 0.2 > 1e-9) ++T;
    SeriesSolution s = truncated_series_solution(c3, T);
    CHECK(s.tail_bound <= 1e-9);
    Vec x_direct = direct_solve(c3);
    for (int v = 0; v < 3; ++v) CHECK(std::fabs(s.x[v] - x_direct[v]) <= 2e-9);

    auto hom = testutil::cycle3(-0.4, {0, 0, 0});
    SeriesSolution z = truncated_series_solution(hom, 5);
    CHECK(z.x == Vec(3, 0.0));
    CHECK(z.tail_bound == 0.0);

    CHECK_THROWS_AS(truncated_series_solution(testutil::cycle3(-0.6), 3),
                    NotWalkSummableError);
}

TEST_CASE("verify_nb_identity frozen cases") {
    auto p3 = testutil::path3();
    Vec gsp = compute_gamma_star(p3).gamma_star;
    NbIdentityReport rep = verify_nb_identity(p3, gsp, 0, 2, 6);
    CHECK(rep.pass);
    // the resummed value is the (0,2) entry of the inverse: 0.5
    CHECK(rep.rhs == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.lhs == doctest::Approx(0.5).epsilon(1e-10));

    auto lone = testutil::single_vertex();
    NbIdentityReport lrep = verify_nb_identity(lone, {}, 0, 0, 3);
    CHECK(lrep.lhs == 1.0);
    CHECK(lrep.rhs == 1.0);
    CHECK(lrep.pass);

    auto c3 = testutil::cycle3();
    Vec gs = compute_gamma_star(c3).gamma_star;
    NbIdentityReport crep = verify_nb_identity(c3, gs, 0, 0, 12);
    CHECK(crep.pass);
    CHECK(crep.discrepancy <= crep.lhs_bound + crep.rhs_bound + 1e-9);
}

TEST_CASE("verify_nb_identity across all pairs of small fixtures") {
    for (const auto& p : {testutil::cycle3(), testutil::path3(),
                          testutil::generated(6, GraphModel::Erdos, 0.6, SignMode::Mixed, 71),
                          testutil::generated(8, GraphModel::Grid, 0.8, SignMode::Attractive, 72)}) {
        Vec gs = compute_gamma_star(p).gamma_star;
        for (int i = 0; i < p.n; ++i)
            for (int r = 0; r < p.n; ++r) {
                NbIdentityReport rep = verify_nb_identity(p, gs, i, r, 10);
                CHECK(rep.pass);
            }
    }
}

TEST_CASE("absolute convergence: nu sums are dominated by the walk-sum series") {
    for (const auto& p : {testutil::cycle3(),
                          testutil::generated(6, GraphModel::Erdos, 0.75, SignMode::Mixed, 73)}) {
        Vec gs = compute_gamma_star(p).gamma_star;
        Eigen::MatrixXd r = dense_R(p).cwiseAbs();
        Eigen::MatrixXd total =
            (Eigen::MatrixXd::Identity(p.n, p.n) - r).inverse();  // sum_t |R|^t
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) {
                double nu_abs = 0.0;
                for (const Walk& w : enumerate_walks(p, i, j, 8, true))
                    nu_abs += std::fabs(nu_weight(p, gs, w));
                CHECK(nu_abs <= total(i, j) + 1e-12);
            }
    }
}

TEST_CASE("edge operator powers resum non-backtracking walk weights") {
    // [A^t D]_{e,f} equals the nu weight of length-(t+1) non-backtracking
    // walks whose first directed step is f and last is e.
    for (const auto& p : {testutil::cycle3(),
                          testutil::generated(6, GraphModel::Erdos, 0.7, SignMode::Mixed, 91)}) {
        Vec gs = compute_gamma_star(p).gamma_star;
        EdgeOperatorMatrices ops = build_A_D(p, gs);
        int m = p.directed_count();
        Eigen::MatrixXd a(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) a(r, c) = ops.A(r, c);
        Eigen::MatrixXd atd = Eigen::MatrixXd::Zero(m, m);
        for (int e = 0; e < m; ++e) atd(e, e) = ops.D[e];

        for (int t = 0; t <= 4; ++t) {
            for (int e = 0; e < m; ++e)
                for (int f = 0; f < m; ++f) {
                    double nu_sum = 0.0;
                    for (const Walk& w :
                         enumerate_walks(p, p.src[f], p.head[e], t + 1, true)) {
                        if (w.length() != t + 1) continue;
                        if (w.vertices[1] != p.head[f]) continue;
                        if (w.vertices[w.length() - 1] != p.src[e]) continue;
                        nu_sum += nu_weight(p, gs, w);
                    }
                    CHECK(std::fabs(atd(e, f) - nu_sum) <= 1e-11);
                }
            atd = a * atd;
        }
    }
}

TEST_CASE("verify_self_return") {
    // trees: exact once the depth covers the diameter
    auto p3 = testutil::path3();
    Vec gsp = compute_gamma_star(p3).gamma_star;
    SelfReturnReport tree = verify_self_return(p3, gsp, 1, 2, diameter(p3));
    CHECK(tree.max_diff == 0.0);
    CHECK(tree.pass);

    auto c3 = testutil::cycle3();
    Vec gs = compute_gamma_star(c3).gamma_star;
    // first recursion value: 1/(1 - 0.16); the iterates climb toward 1.25
    SelfReturnReport d1 = verify_self_return(c3, gs, 0, 1, 1);
    CHECK(d1.gamma_d == doctest::Approx(1.0 / (1.0 - c3.w2[0])).epsilon(1e-14));
    SelfReturnReport d2 = verify_self_return(c3, gs, 0, 1, 2);
    CHECK(d1.gamma_d > 1.0);
    CHECK(d2.gamma_d > d1.gamma_d);
    CHECK(d2.gamma_d < gs[0] + 1e-12);

    SelfReturnReport deep = verify_self_return(c3, gs, 0, 1, 200);
    CHECK(deep.predicted_converged);
    CHECK(deep.pass);
    CHECK(deep.max_diff <= 1e-9);

    SelfReturnReport d0 = verify_self_return(c3, gs, 0, 1, 0);
    CHECK(d0.gamma_d == 1.0);
    CHECK_FALSE(d0.predicted_converged);  // baseline only, no verdict
    CHECK(d0.pass);
}
