#include "minsum/walksum.hpp"

#include <algorithm>
#include <cmath>

#include "minsum/analysis.hpp"
#include "minsum/engine.hpp"
#include "minsum/errors.hpp"
#include "minsum/kernels.hpp"

namespace minsum {

namespace {

void check_walk(const QuadraticProblem& p, const Walk& w) {
    if (w.vertices.empty()) throw InvalidWalkError("empty vertex sequence");
    for (int v : w.vertices)
        if (v < 0 || v >= p.n) throw InvalidWalkError("vertex out of range");
    for (size_t k = 0; k + 1 < w.vertices.size(); ++k)
        if (p.directed_index(w.vertices[k], w.vertices[k + 1]) < 0)
            throw InvalidWalkError("vertices " + std::to_string(w.vertices[k]) + " and " +
                                   std::to_string(w.vertices[k + 1]) + " are not adjacent");
}

struct Dfs {
    const QuadraticProblem& p;
    int target;
    int max_len;
    bool nb;
    long budget;
    long visited = 0;
    std::vector<int> stack;
    std::vector<Walk>* out;

    void run(int v) {
        if (++visited > budget) throw EnumerationBudgetExceededError(budget);
        stack.push_back(v);
        if (v == target) out->push_back(Walk{stack});
        if (static_cast<int>(stack.size()) - 1 < max_len) {
            int prev = stack.size() >= 2 ? stack[stack.size() - 2] : -1;
            for (auto [u, k] : p.adj[v]) {
                if (nb && u == prev) continue;
                run(u);
            }
        }
        stack.pop_back();
    }
};

// Series x_{T} = sum_{t<=T} R^t h by repeated sparse application of R.
Vec series_sum(const QuadraticProblem& p, const Vec& h0, int T) {
    Vec acc = h0, term = h0, next(p.n);
    for (int t = 1; t <= T; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int e = 0; e < p.directed_count(); ++e)
            next[p.head[e]] += -p.coupling[e] * term[p.src[e]];
        term.swap(next);
        for (int v = 0; v < p.n; ++v) acc[v] += term[v];
    }
    return acc;
}

double geometric_tail(double rho, int T, double scale) {
    if (scale == 0.0) return 0.0;
    return scale * std::pow(rho, T + 1) / (1.0 - rho);
}

}  // namespace

double rho_weight(const QuadraticProblem& p, const Walk& w) {
    check_walk(p, w);
    double prod = 1.0;
    for (size_t k = 0; k + 1 < w.vertices.size(); ++k) {
        int e = p.directed_index(w.vertices[k], w.vertices[k + 1]);
        prod *= -p.coupling[e];
    }
    return prod;
}

double nu_weight(const QuadraticProblem& p, const Vec& gamma_star, const Walk& w) {
    check_walk(p, w);
    if (static_cast<int>(gamma_star.size()) != p.directed_count())
        throw LengthMismatchError("gamma_star size");
    for (size_t k = 1; k + 1 < w.vertices.size(); ++k)
        if (w.vertices[k - 1] == w.vertices[k + 1])
            throw BacktrackingWalkError(static_cast<int>(k));
    double prod = 1.0;
    for (size_t k = 0; k + 1 < w.vertices.size(); ++k) {
        int e = p.directed_index(w.vertices[k], w.vertices[k + 1]);
        prod *= gamma_star[e] * -p.coupling[e];
    }
    return prod;
}

std::vector<Walk> enumerate_walks(const QuadraticProblem& p, int i, int j, int max_len,
                                  bool nonbacktracking, long budget) {
    if (i < 0 || i >= p.n || j < 0 || j >= p.n)
        throw InvalidParamsError("walk endpoints out of range");
    if (max_len < 0) throw InvalidParamsError("max_len must be >= 0");
    std::vector<Walk> out;
    Dfs dfs{p, j, max_len, nonbacktracking, budget, 0, {}, &out};
    dfs.run(i);
    return out;
}

std::vector<double> count_walks(const QuadraticProblem& p, int i, int j, int max_len,
                                bool nonbacktracking) {
    if (i < 0 || i >= p.n || j < 0 || j >= p.n)
        throw InvalidParamsError("walk endpoints out of range");
    std::vector<double> counts(max_len + 1, 0.0);
    counts[0] = (i == j) ? 1.0 : 0.0;
    if (max_len == 0) return counts;
    // state = directed edge of the last step
    int m = p.directed_count();
    Vec cur(m, 0.0), nxt(m);
    for (auto [u, k] : p.adj[i]) {
        int e = p.edges[k].first == i ? 2 * k : 2 * k + 1;  // i -> u
        cur[e] = 1.0;
    }
    for (int len = 1; len <= max_len; ++len) {
        double total = 0.0;
        for (int e = 0; e < m; ++e)
            if (p.head[e] == j) total += cur[e];
        counts[len] = total;
        if (len == max_len) break;
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int e = 0; e < m; ++e) {
            if (cur[e] == 0.0) continue;
            int v = p.head[e];
            for (auto [u, k] : p.adj[v]) {
                if (nonbacktracking && u == p.src[e]) continue;
                int f = p.edges[k].first == v ? 2 * k : 2 * k + 1;  // v -> u
                nxt[f] += cur[e];
            }
        }
        cur.swap(nxt);
    }
    return counts;
}

SeriesSolution truncated_series_solution(const QuadraticProblem& p, int T) {
    double rho = rho_abs_R(p);
    if (rho >= 1.0) throw NotWalkSummableError(rho);
    SeriesSolution s;
    s.terms = T;
    s.x = series_sum(p, p.h, T);
    s.tail_bound = geometric_tail(rho, T, max_abs(p.h));
    return s;
}

NbIdentityReport verify_nb_identity(const QuadraticProblem& p, const Vec& gamma_star,
                                    int i, int r, int depth, long budget) {
    if (static_cast<int>(gamma_star.size()) != p.directed_count())
        throw LengthMismatchError("gamma_star size");
    double rho = rho_abs_R(p);
    if (rho >= 1.0) throw NotWalkSummableError(rho);

    NbIdentityReport rep;
    rep.nb_depth = depth;

    // Left side: component (i, r) of the truncated walk series, depth chosen
    // so the geometric tail is negligible against the enumeration side.
    int T = 0;
    if (rho > 0.0) {
        while (geometric_tail(rho, T, 1.0) > 1e-12 && T < 100000) ++T;
    }
    rep.series_terms = T;
    Vec unit(p.n, 0.0);
    unit[r] = 1.0;
    rep.lhs = series_sum(p, unit, T)[i];
    rep.lhs_bound = geometric_tail(rho, T, 1.0);

    // Right side: non-backtracking resummation at the fixed point.
    double nu_sum = 0.0;
    long count = 0;
    for (const Walk& w : enumerate_walks(p, i, r, depth, true, budget)) {
        nu_sum += nu_weight(p, gamma_star, w);
        ++count;
    }
    rep.nb_walk_count = count;
    double den = 1.0;
    for (auto [u, k] : p.adj[r]) {
        int e = p.edges[k].first == u ? 2 * k : 2 * k + 1;  // u -> r
        den -= p.w2[e] * gamma_star[e];
    }
    rep.rhs = nu_sum / den;
    rep.rhs_bound = geometric_tail(rho, depth, 1.0) / den;

    rep.discrepancy = std::fabs(rep.lhs - rep.rhs);
    rep.pass = rep.discrepancy <= rep.lhs_bound + rep.rhs_bound + 1e-9;
    return rep;
}

SelfReturnReport verify_self_return(const QuadraticProblem& p, const Vec& gamma_star,
                                    int i, int j, int depth, double tol) {
    if (static_cast<int>(gamma_star.size()) != p.directed_count())
        throw LengthMismatchError("gamma_star size");
    int e = p.directed_index(i, j);
    if (e < 0) throw MissingEdgeValueError(i, j);

    SelfReturnReport rep;
    rep.depth = depth;
    rep.gamma_star = gamma_star[e];

    // Bounded-excursion recursion from the all-ones start; one application of
    // the update per unit of depth. Track the plain fixed-point iteration
    // from zero alongside to know the depth at which agreement is expected.
    Vec g(p.directed_count(), 1.0);
    for (int d = 0; d < depth; ++d) g = gamma_step(p, g);
    rep.gamma_d = g[e];
    rep.diff = std::fabs(g[e] - gamma_star[e]);
    rep.max_diff = 0.0;
    for (int f = 0; f < p.directed_count(); ++f)
        rep.max_diff = std::max(rep.max_diff, std::fabs(g[f] - gamma_star[f]));

    Vec ref(p.directed_count(), 0.0);
    long needed = 0;
    const auto& kern = kernels::active_kernels();
    for (long t = 0; t < 100000; ++t) {
        Vec next = gamma_step(p, ref);
        double delta = kern.max_abs_diff(next.data(), ref.data(), p.directed_count());
        ref.swap(next);
        needed = t + 1;
        if (delta <= tol) break;
    }
    // all-ones equals one application from zero, so depth d sits at step d+1
    rep.predicted_converged = depth + 1 >= needed;
    rep.pass = !rep.predicted_converged || rep.max_diff <= 10.0 * tol;
    return rep;
}

}  // namespace minsum
