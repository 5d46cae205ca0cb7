#pragma once

#include <vector>

#include "minsum/problem.hpp"
#include "minsum/types.hpp"

namespace minsum {

struct Walk {
    std::vector<int> vertices;  // w_0 .. w_k, consecutive pairs adjacent
    int length() const { return static_cast<int>(vertices.size()) - 1; }
};

constexpr long kEnumerationBudget = 10'000'000;

/// Product of R entries along the walk (R = I - Gamma, so R_ij = -coupling);
/// 1 for a single vertex. Throws InvalidWalkError.
double rho_weight(const QuadraticProblem& p, const Walk& w);

/// Product of gamma*_uv * R_uv factors along a non-backtracking walk; 1 for a
/// single vertex. Throws BacktrackingWalkError / InvalidWalkError.
double nu_weight(const QuadraticProblem& p, const Vec& gamma_star, const Walk& w);

/// All walks from i to j of length <= max_len in lexicographic order,
/// optionally restricted to non-backtracking ones. Depth-first with a hard
/// node budget; throws EnumerationBudgetExceededError.
std::vector<Walk> enumerate_walks(const QuadraticProblem& p, int i, int j, int max_len,
                                  bool nonbacktracking,
                                  long budget = kEnumerationBudget);

/// count[k] = number of walks i->j of length exactly k, via a transfer-matrix
/// pass over directed edges. Enumeration-free, so it doubles as an oracle for
/// enumerate_walks and as a budget predictor.
std::vector<double> count_walks(const QuadraticProblem& p, int i, int j, int max_len,
                                bool nonbacktracking);

struct SeriesSolution {
    Vec x;              // sum_{t<=T} R^t h
    double tail_bound;  // ||h||_inf * rho^(T+1) / (1 - rho)
    int terms;          // T
};

/// Truncated walk-sum series for the solution. Throws NotWalkSummableError.
SeriesSolution truncated_series_solution(const QuadraticProblem& p, int T);

struct NbIdentityReport {
    double lhs = 0.0;  // series value of sum_t [R^t]_{ir}
    double rhs = 0.0;  // nu(non-backtracking walks) / vertex factor
    double lhs_bound = 0.0;
    double rhs_bound = 0.0;
    double discrepancy = 0.0;
    bool pass = false;
    int series_terms = 0;
    int nb_depth = 0;
    long nb_walk_count = 0;
};

/// Checks the non-backtracking resummation of the walk series between a
/// vertex pair at finite depth, reporting both truncation bounds.
NbIdentityReport verify_nb_identity(const QuadraticProblem& p, const Vec& gamma_star,
                                    int i, int r, int depth,
                                    long budget = kEnumerationBudget);

struct SelfReturnReport {
    int depth = 0;
    double gamma_d = 0.0;       // recursion value at the requested edge
    double gamma_star = 0.0;    // reference fixed point at that edge
    double diff = 0.0;          // |gamma_d - gamma_star| at the edge
    double max_diff = 0.0;      // max over all directed edges
    bool predicted_converged = false;  // depth reaches the fixed-point horizon
    bool pass = false;          // vacuous when not predicted_converged
};

/// Runs the bounded-excursion recursion gamma^(d) from the all-ones start and
/// compares against the fixed point; on trees the two agree exactly once the
/// depth covers the diameter.
SelfReturnReport verify_self_return(const QuadraticProblem& p, const Vec& gamma_star,
                                    int i, int j, int depth, double tol = 1e-10);

}  // namespace minsum
