#pragma once

#include <utility>
#include <vector>

#include "minsum/types.hpp"

namespace minsum {

/// User-facing sparse symmetric input: upper-triangle entries (i <= j) of the
/// coefficient matrix plus the linear term. Diagonal entries may be supplied
/// explicitly; absent ones default to 1.
struct RawProblem {
    struct Entry {
        int i, j;
        double value;
    };
    int n = 0;
    std::vector<Entry> entries;
    Vec h;
};

/// Diagonal of the original matrix, kept so solutions can be mapped back.
struct NormalizationRecord {
    Vec d;
};

/// Normalized problem: unit diagonal (implicit), nonzero couplings on a
/// connected simple graph. Directed edges are indexed densely: undirected
/// edge k = (i,j) with i<j owns directed slots 2k (i->j) and 2k+1 (j->i);
/// reverse(e) == e^1. Immutable after construction; safe to share across
/// threads.
struct QuadraticProblem {
    int n = 0;

    std::vector<std::pair<int, int>> edges;  // undirected, i<j, lexicographic

    // Per directed edge e: src/head endpoints, coupling = Gamma_{src,head}
    // (symmetric across the pair), w2 = coupling^2.
    std::vector<int> src, head;
    Vec coupling, w2;

    Vec h;

    // vertex -> sorted list of (neighbor, undirected edge id)
    std::vector<std::vector<std::pair<int, int>>> adj;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int directed_count() const { return 2 * edge_count(); }
    static int reverse(int e) { return e ^ 1; }

    /// Dense index of the directed edge i->j, or -1 when (i,j) is not an edge.
    int directed_index(int i, int j) const;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

struct ValidationReport {
    bool positive_definite = false;
    bool connected = false;
    bool unit_diagonal = true;
    double min_eigenvalue = 0.0;
    bool ok() const { return positive_definite && connected && unit_diagonal; }
};

/// Rescale to unit diagonal, prune zero couplings, index directed edges.
/// Throws NonPositiveDiagonalError, DisconnectedGraphError, ParseError-level
/// structural issues are caught earlier by the loader.
std::pair<QuadraticProblem, NormalizationRecord> normalize(const RawProblem& raw);

/// Map a solution of the normalized system back to the original variables.
Vec denormalize_solution(const Vec& x_norm, const NormalizationRecord& rec);

ValidationReport validate(const QuadraticProblem& p);

/// Dense-factorization ground truth for the normalized system; the oracle
/// every exactness test compares against. Throws NotPositiveDefiniteError.
Vec direct_solve(const QuadraticProblem& p);

/// Infinity norm of the residual of the normalized system at x.
double residual(const QuadraticProblem& p, const Vec& x);

/// Value of the quadratic objective at x.
double objective(const QuadraticProblem& p, const Vec& x);

/// Exact graph diameter (BFS from every vertex); 0 for a single vertex.
int diameter(const QuadraticProblem& p);

}  // namespace minsum
