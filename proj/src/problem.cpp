#include "minsum/problem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "minsum/errors.hpp"

namespace minsum {

namespace {

Eigen::MatrixXd dense_gamma(const QuadraticProblem& p) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(p.n, p.n);
    for (int k = 0; k < p.edge_count(); ++k) {
        auto [i, j] = p.edges[k];
        g(i, j) = p.coupling[2 * k];
        g(j, i) = p.coupling[2 * k];
    }
    return g;
}

std::vector<std::vector<int>> connected_components(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<int> q;
        q.push(s);
        comp[s] = id;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            out[id].push_back(v);
            for (int u : adj[v])
                if (comp[u] < 0) {
                    comp[u] = id;
                    q.push(u);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

}  // namespace

int QuadraticProblem::directed_index(int i, int j) const {
    if (i < 0 || i >= n || j < 0 || j >= n) return -1;
    const auto& row = adj[i];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(j, -1));
    if (it == row.end() || it->first != j) return -1;
    int k = it->second;
    return edges[k].first == i ? 2 * k : 2 * k + 1;
}

std::pair<QuadraticProblem, NormalizationRecord> normalize(const RawProblem& raw) {
    if (raw.n < 1) throw InvalidParamsError("vertex count must be >= 1");
    if (static_cast<int>(raw.h.size()) != raw.n)
        throw LengthMismatchError("h has " + std::to_string(raw.h.size()) +
                                  " entries for n = " + std::to_string(raw.n));

    Vec d(raw.n, 1.0);
    std::map<std::pair<int, int>, double> off;
    for (const auto& e : raw.entries) {
        if (e.i < 0 || e.j < 0 || e.i >= raw.n || e.j >= raw.n || e.i > e.j)
            throw InvalidParamsError("bad entry (" + std::to_string(e.i) + "," +
                                     std::to_string(e.j) + ")");
        if (e.i == e.j)
            d[e.i] = e.value;
        else
            off[{e.i, e.j}] = e.value;
    }
    for (int i = 0; i < raw.n; ++i)
        if (!(d[i] > 0.0)) throw NonPositiveDiagonalError(i, d[i]);

    Vec inv_sqrt(raw.n);
    for (int i = 0; i < raw.n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(d[i]);

    QuadraticProblem p;
    p.n = raw.n;
    for (const auto& [ij, v] : off) {
        if (v == 0.0) continue;  // zero couplings are pruned from the edge set
        p.edges.push_back(ij);
        double scaled = v * inv_sqrt[ij.first] * inv_sqrt[ij.second];
        p.coupling.push_back(scaled);
        p.coupling.push_back(scaled);
    }

    auto comps = connected_components(p.n, p.edges);
    if (comps.size() != 1) throw DisconnectedGraphError(std::move(comps));

    int m = static_cast<int>(p.edges.size());
    p.src.resize(2 * m);
    p.head.resize(2 * m);
    p.w2.resize(2 * m);
    p.adj.assign(p.n, {});
    for (int k = 0; k < m; ++k) {
        auto [i, j] = p.edges[k];
        p.src[2 * k] = i;
        p.head[2 * k] = j;
        p.src[2 * k + 1] = j;
        p.head[2 * k + 1] = i;
        double c = p.coupling[2 * k];
        p.w2[2 * k] = c * c;
        p.w2[2 * k + 1] = c * c;
        p.adj[i].emplace_back(j, k);
        p.adj[j].emplace_back(i, k);
    }
    for (auto& row : p.adj) std::sort(row.begin(), row.end());

    p.h.resize(p.n);
    for (int i = 0; i < p.n; ++i) p.h[i] = raw.h[i] * inv_sqrt[i];

    return {std::move(p), NormalizationRecord{std::move(d)}};
}

Vec denormalize_solution(const Vec& x_norm, const NormalizationRecord& rec) {
    if (x_norm.size() != rec.d.size())
        throw LengthMismatchError("solution has " + std::to_string(x_norm.size()) +
                                  " entries, record has " + std::to_string(rec.d.size()));
    Vec x(x_norm.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = x_norm[i] / std::sqrt(rec.d[i]);
    return x;
}

ValidationReport validate(const QuadraticProblem& p) {
    ValidationReport r;
    r.unit_diagonal = true;  // implicit in the representation
    r.connected = connected_components(p.n, p.edges).size() == 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_gamma(p),
                                                      Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.positive_definite = r.min_eigenvalue > 1e-12;
    return r;
}

Vec direct_solve(const QuadraticProblem& p) {
    Eigen::MatrixXd g = dense_gamma(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig <= 1e-12) throw NotPositiveDefiniteError(min_eig);

    Eigen::Map<const Eigen::VectorXd> h(p.h.data(), p.n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    Eigen::VectorXd x = ldlt.solve(h);
    x += ldlt.solve(h - g * x);  // one refinement pass tightens the residual
    return Vec(x.data(), x.data() + p.n);
}

double residual(const QuadraticProblem& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.n)
        throw LengthMismatchError("x has " + std::to_string(x.size()) +
                                  " entries for n = " + std::to_string(p.n));
    Vec acc(p.n, 0.0);
    int m = p.directed_count();
    for (int e = 0; e < m; ++e) acc[p.head[e]] += p.coupling[e] * x[p.src[e]];
    double r = 0.0;
    for (int v = 0; v < p.n; ++v) r = std::max(r, std::fabs(x[v] + acc[v] - p.h[v]));
    return r;
}

double objective(const QuadraticProblem& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.n)
        throw LengthMismatchError("x has " + std::to_string(x.size()) +
                                  " entries for n = " + std::to_string(p.n));
    double quad = 0.0, lin = 0.0;
    for (int v = 0; v < p.n; ++v) {
        quad += x[v] * x[v];
        lin += p.h[v] * x[v];
    }
    for (int k = 0; k < p.edge_count(); ++k) {
        auto [i, j] = p.edges[k];
        quad += 2.0 * p.coupling[2 * k] * x[i] * x[j];
    }
    return 0.5 * quad - lin;
}

int diameter(const QuadraticProblem& p) {
    int diam = 0;
    std::vector<int> dist(p.n);
    for (int s = 0; s < p.n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        q.push(s);
        dist[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            diam = std::max(diam, dist[v]);
            for (auto [u, k] : p.adj[v])
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push(u);
                }
        }
    }
    return diam;
}

}  // namespace minsum
