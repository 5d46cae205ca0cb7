#include "minsum/analysis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <queue>

#include "minsum/decomposition.hpp"
#include "minsum/engine.hpp"
#include "minsum/errors.hpp"
#include "minsum/kernels.hpp"

namespace minsum {

namespace {

void require_edge_sized(const QuadraticProblem& p, const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != p.directed_count())
        throw LengthMismatchError(std::string(what) + " has " + std::to_string(v.size()) +
                                  " entries for " + std::to_string(p.directed_count()) +
                                  " directed edges");
}

/// True when the nonzero pattern of m is acyclic (Kahn's algorithm), i.e. the
/// matrix is nilpotent and its spectral radius is exactly 0.
bool pattern_acyclic(const Matrix& m) {
    int n = m.rows;
    std::vector<int> indeg(n, 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (m(r, c) != 0.0) ++indeg[c];
    std::queue<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push(v);
    int removed = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++removed;
        for (int c = 0; c < n; ++c)
            if (m(v, c) != 0.0 && --indeg[c] == 0) q.push(c);
    }
    return removed == n;
}

bool is_symmetric(const Matrix& m) {
    if (m.rows != m.cols) return false;
    for (int r = 0; r < m.rows; ++r)
        for (int c = r + 1; c < m.cols; ++c)
            if (m(r, c) != m(c, r)) return false;
    return true;
}

}  // namespace

Vec operator_F(const QuadraticProblem& p, const Vec& gamma) { return gamma_step(p, gamma); }

FixedPointResult compute_gamma_star(const QuadraticProblem& p, double tol, const Vec* init,
                                    long max_iter) {
    construct_witness(p);  // throws NotWalkSummableError outside the domain

    const int m = p.directed_count();
    FixedPointResult r;
    r.gamma_star = init ? *init : Vec(m, 0.0);
    require_edge_sized(p, r.gamma_star, "init");
    if (m == 0) return r;

    Vec gsum(p.n), next(m);
    const auto& kern = kernels::active_kernels();
    for (long t = 0; t < max_iter; ++t) {
        kernels::accumulate_head_w2(p.head.data(), p.w2.data(), r.gamma_star.data(), m,
                                    gsum.data(), p.n);
        int bad = kern.gamma_update(p.src.data(), p.w2.data(), r.gamma_star.data(),
                                    gsum.data(), next.data(), m);
        if (bad >= 0) throw IllPosedError(bad, t);
        r.final_delta = kern.max_abs_diff(next.data(), r.gamma_star.data(), m);
        r.gamma_star.swap(next);
        r.iterations = t + 1;
        if (r.final_delta <= tol) return r;
    }
    throw NoConvergenceError(r.final_delta, tol);
}

EdgeOperatorMatrices build_A_D(const QuadraticProblem& p, const Vec& gamma_star) {
    require_edge_sized(p, gamma_star, "gamma_star");
    const int m = p.directed_count();
    EdgeOperatorMatrices out;
    out.A = Matrix(m, m);
    out.D.resize(m);
    out.y.resize(m);
    for (int e = 0; e < m; ++e) {
        int i = p.src[e], j = p.head[e];
        double w = -gamma_star[e] * p.coupling[e];
        out.D[e] = w;
        out.y[e] = p.h[i];
        // columns are the edges feeding i, the reverse edge excluded
        for (auto [u, k] : p.adj[i]) {
            if (u == j) continue;
            int f = p.edges[k].first == u ? 2 * k : 2 * k + 1;  // u -> i
            out.A(e, f) = w;
        }
    }
    return out;
}

double spectral_radius(const Matrix& m_abs, double tol, int max_iter) {
    if (m_abs.rows != m_abs.cols) throw InvalidParamsError("matrix must be square");
    const int n = m_abs.rows;
    if (n == 0) return 0.0;
    for (double v : m_abs.data)
        if (!(v >= 0.0)) throw InvalidParamsError("matrix must be entrywise nonnegative");

    if (pattern_acyclic(m_abs)) return 0.0;

    // Power iteration on I + M: same Perron vector, radius shifted by one,
    // and the positive diagonal removes periodicity.
    const bool symmetric = is_symmetric(m_abs);
    Vec v(n, 1.0), u(n), w(n);
    double prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            const double* row = &m_abs.data[static_cast<size_t>(r) * n];
            for (int c = 0; c < n; ++c) s += row[c] * v[c];
            u[r] = s;
            w[r] = v[r] + s;
        }
        double lambda;
        if (symmetric) {
            double num = 0.0, den = 0.0;
            for (int r = 0; r < n; ++r) {
                num += v[r] * w[r];
                den += v[r] * v[r];
            }
            lambda = num / den;
        } else {
            lambda = 0.0;
            for (int r = 0; r < n; ++r) lambda = std::max(lambda, std::fabs(w[r]));
        }
        double norm = max_abs(w);
        for (int r = 0; r < n; ++r) v[r] = w[r] / norm;
        if (it > 1 && std::fabs(lambda - prev) <= tol * std::max(1.0, std::fabs(lambda)))
            return std::max(0.0, lambda - 1.0);
        prev = lambda;
    }
    throw NoConvergenceError(prev, prev);
}

ZFixed z_fixed(const QuadraticProblem& p, const Vec& gamma_star) {
    EdgeOperatorMatrices ops = build_A_D(p, gamma_star);
    const int m = p.directed_count();
    double rho_a = spectral_radius(abs_matrix(ops.A));
    if (rho_a >= 1.0) throw SpectralRadiusTooLargeError(rho_a);

    Eigen::MatrixXd ia = Eigen::MatrixXd::Identity(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) ia(r, c) -= ops.A(r, c);
    Eigen::VectorXd rhs(m);
    for (int e = 0; e < m; ++e) rhs[e] = -ops.D[e] * ops.y[e];
    Eigen::VectorXd z = ia.partialPivLu().solve(rhs);

    ZFixed out;
    out.z_infinity.assign(z.data(), z.data() + m);
    out.x_infinity = estimate(p, gamma_star, out.z_infinity).x;
    return out;
}

ZFixed z_fixed_series(const QuadraticProblem& p, const Vec& gamma_star, double term_tol) {
    EdgeOperatorMatrices ops = build_A_D(p, gamma_star);
    const int m = p.directed_count();
    Vec term(m), z(m, 0.0), next(m);
    for (int e = 0; e < m; ++e) term[e] = ops.D[e] * ops.y[e];
    const long cap = 1000000;
    long t = 0;
    for (; t < cap; ++t) {
        for (int e = 0; e < m; ++e) z[e] -= term[e];
        if (max_abs(term) < term_tol) break;
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            for (int c = 0; c < m; ++c) s += ops.A(r, c) * term[c];
            next[r] = s;
        }
        term.swap(next);
    }
    if (t == cap) throw NoConvergenceError(max_abs(term), term_tol);
    ZFixed out;
    out.z_infinity = std::move(z);
    out.x_infinity = estimate(p, gamma_star, out.z_infinity).x;
    return out;
}

Matrix R_matrix(const QuadraticProblem& p) {
    Matrix r(p.n, p.n);
    for (int k = 0; k < p.edge_count(); ++k) {
        auto [i, j] = p.edges[k];
        r(i, j) = -p.coupling[2 * k];
        r(j, i) = -p.coupling[2 * k];
    }
    return r;
}

Matrix abs_R_matrix(const QuadraticProblem& p) { return abs_matrix(R_matrix(p)); }

Matrix abs_matrix(const Matrix& m) {
    Matrix a = m;
    for (double& v : a.data) v = std::fabs(v);
    return a;
}

double rho_abs_R(const QuadraticProblem& p) { return spectral_radius(abs_R_matrix(p)); }

}  // namespace minsum
