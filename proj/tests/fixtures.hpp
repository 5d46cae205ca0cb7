#pragma once

// Shared construction helpers for the test suites. The three named fixtures
// are the hand-checkable instances most expected values below are frozen
// against:
//   cycle3: coupling -0.4 on a triangle, h = 1      -> x* = [5,5,5]
//   path3:  coupling -0.5 on 1-2-3, h = [1,0,0]     -> x* = [1.5,1,0.5]
//   edge2:  single edge, coupling -0.5, h = [1,0]   -> x* = [4/3, 2/3]

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "minsum/analysis.hpp"
#include "minsum/generate.hpp"
#include "minsum/problem.hpp"
#include "minsum/rng.hpp"

namespace testutil {

inline minsum::QuadraticProblem make_problem(
    int n, const std::vector<std::tuple<int, int, double>>& couplings,
    const std::vector<double>& h) {
    minsum::RawProblem raw;
    raw.n = n;
    raw.h = h;
    for (auto [i, j, v] : couplings) raw.entries.push_back({i, j, v});
    return minsum::normalize(raw).first;
}

inline minsum::QuadraticProblem cycle3(double coupling = -0.4,
                                       std::vector<double> h = {1, 1, 1}) {
    return make_problem(3, {{0, 1, coupling}, {0, 2, coupling}, {1, 2, coupling}},
                        std::move(h));
}

inline minsum::QuadraticProblem path3(double coupling = -0.5,
                                      std::vector<double> h = {1, 0, 0}) {
    return make_problem(3, {{0, 1, coupling}, {1, 2, coupling}}, std::move(h));
}

inline minsum::QuadraticProblem edge2(double coupling = -0.5,
                                      std::vector<double> h = {1, 0}) {
    return make_problem(2, {{0, 1, coupling}}, std::move(h));
}

inline minsum::QuadraticProblem single_vertex(double h0 = 2.5) {
    return make_problem(1, {}, {h0});
}

inline minsum::QuadraticProblem generated(int n, minsum::GraphModel model, double rho,
                                          minsum::SignMode sign, std::uint64_t seed) {
    minsum::GenSpec spec;
    spec.n = n;
    spec.model = model;
    spec.target_rho = rho;
    spec.sign_mode = sign;
    spec.seed = seed;
    return minsum::normalize(minsum::generate_instance(spec)).first;
}

/// Uniform random tree (random attachment) with couplings scaled to the
/// target spectral radius, for the tree-exactness tests.
inline minsum::QuadraticProblem random_tree(int n, double rho, std::uint64_t seed) {
    minsum::Rng rng(seed);
    minsum::RawProblem raw;
    raw.n = n;
    raw.h.resize(n);
    std::vector<std::tuple<int, int, double>> edges;
    for (int v = 1; v < n; ++v) {
        int parent = static_cast<int>(rng.below(v));
        edges.emplace_back(std::min(parent, v), std::max(parent, v),
                           rng.bernoulli(0.5) ? 1.0 : -1.0);
    }
    for (int i = 0; i < n; ++i) raw.h[i] = rng.uniform(-2.0, 2.0);
    for (auto [i, j, s] : edges) raw.entries.push_back({i, j, s});
    auto p = minsum::normalize(raw).first;
    if (n > 1) {
        double rho0 = minsum::rho_abs_R(p);
        for (auto& [i, j, s] : edges) s *= rho / rho0;
    }
    raw.entries.clear();
    for (auto [i, j, s] : edges) raw.entries.push_back({i, j, s});
    return minsum::normalize(raw).first;
}

}  // namespace testutil
