#pragma once

#include <string>
#include <vector>

#include "minsum/problem.hpp"
#include "minsum/types.hpp"

namespace minsum {

/// Quadratic (gamma) and linear (z) parameters of a decomposition, indexed by
/// directed edge. A value record: all operations on it are pure.
struct EdgeParams {
    Vec gamma, z;

    static EdgeParams zeros(const QuadraticProblem& p) {
        return EdgeParams{Vec(p.directed_count(), 0.0), Vec(p.directed_count(), 0.0)};
    }
};

/// A certified point of the convex-decomposition set: pairwise products
/// coupling^2 * v_ij * v_ji >= 1 on every edge and strict per-vertex slack
/// 1 - sum_i coupling^2 * v_ij > 0. margin = min over both families of
/// certificate quantities (pairwise products and vertex slacks).
struct Witness {
    Vec v;
    double margin = 0.0;
};

/// Quadratic initial messages a/2 * x^2 - b * x per directed edge.
struct InitialMessages {
    Vec a, b;
};

struct ConvexityCheck {
    bool convex = false;
    double margin = 0.0;
    std::string violation;  // first violated condition, empty when convex
};

/// Definition check: gamma >= 0 and coupling^2*gamma_ij*gamma_ji >= 1 per
/// edge, vertex slack strictly positive. Throws LengthMismatchError when
/// gamma is not defined on all directed edges.
ConvexityCheck is_convex_decomposition(const QuadraticProblem& p, const Vec& gamma);

/// Componentwise domination gamma0 <= v. The cross terms of the two pairwise
/// functions coincide, so convexity of their difference reduces to exactly
/// this comparison. Throws InvalidWitnessError when the witness fails its own
/// certificate.
bool is_convex_dominated(const QuadraticProblem& p, const Vec& gamma0, const Witness& w);

/// Builds the canonical witness from the walk-sum weights: solve
/// (I - |R|) w = 1 and set v_ij = w_i / (|coupling_ij| * w_j), nudged up by a
/// few ulps so the pairwise certificate survives rounding. Throws
/// NotWalkSummableError (carrying rho(|R|)) when no witness exists.
Witness construct_witness(const QuadraticProblem& p);

/// Fold quadratic initial messages into a base decomposition:
/// gamma0 = base.gamma - a/coupling^2, z0 = base.z - b.
EdgeParams from_messages(const QuadraticProblem& p, const EdgeParams& base,
                         const InitialMessages& msgs);

struct VertexFunction {
    double quad;  // coefficient of x^2/2
    double lin;   // coefficient of x
};
struct EdgeFunction {
    double quad_ii, quad_jj, cross;  // Hessian [[quad_ii, cross], [cross, quad_jj]]
    double lin_i, lin_j;
};
struct ComponentFunctions {
    std::vector<VertexFunction> vertex;  // per vertex
    std::vector<EdgeFunction> edge;      // per undirected edge
};

/// Coefficient records of the per-vertex / per-edge pieces; summing them
/// reproduces the objective exactly, which the tests use as a self-check.
ComponentFunctions component_functions(const QuadraticProblem& p, const EdgeParams& params);

}  // namespace minsum
