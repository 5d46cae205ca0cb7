#pragma once

#include <vector>

#include "minsum/problem.hpp"
#include "minsum/types.hpp"

namespace minsum {

/// The quadratic-parameter update as an operator on directed-edge vectors;
/// same arithmetic as gamma_step, exposed under its own name for the
/// fixed-point and monotonicity work.
Vec operator_F(const QuadraticProblem& p, const Vec& gamma);

struct FixedPointResult {
    Vec gamma_star;
    long iterations = 0;
    double final_delta = 0.0;
};

/// Iterate F to its fixed point. Default start is the zero vector (ascending
/// sequence); pass a witness to descend instead. Throws NotWalkSummableError
/// when no convex decomposition exists, NoConvergenceError past max_iter.
FixedPointResult compute_gamma_star(const QuadraticProblem& p, double tol = 1e-10,
                                    const Vec* init = nullptr, long max_iter = 100000);

/// Directed-edge operator of the linear-parameter recursion
/// z' = -D y + A z at the fixed point: A[(i,j),(u,i)] = -gamma*_ij *
/// coupling_ij for u in N(i)\{j}, D diagonal with the same values,
/// y[(i,j)] = h_i.
struct EdgeOperatorMatrices {
    Matrix A;
    Vec D;  // diagonal
    Vec y;
};

EdgeOperatorMatrices build_A_D(const QuadraticProblem& p, const Vec& gamma_star);

/// Perron value of an entrywise-nonnegative matrix. Power iteration from the
/// all-ones vector with relative tolerance tol; nilpotent inputs are detected
/// structurally and return 0 exactly. Throws NoConvergenceError (with the
/// last two quotients) after max_iter.
double spectral_radius(const Matrix& m_abs, double tol = 1e-10, int max_iter = 10000);

struct ZFixed {
    Vec z_infinity;
    Vec x_infinity;
};

/// Closed-form limit of the linear parameters, (I - A) z = -D y solved
/// densely, and the estimate it induces. Throws NotWalkSummableError /
/// NoConvergenceError from the spectral check.
ZFixed z_fixed(const QuadraticProblem& p, const Vec& gamma_star);

/// Same limit through the geometric series, truncated when the term norm
/// drops below term_tol; the cross-check for the dense route.
ZFixed z_fixed_series(const QuadraticProblem& p, const Vec& gamma_star,
                      double term_tol = 1e-14);

// Dense builders shared with the diagnostics and the test oracles.
Matrix R_matrix(const QuadraticProblem& p);      // I - Gamma (signed)
Matrix abs_R_matrix(const QuadraticProblem& p);  // entrywise |R|
Matrix abs_matrix(const Matrix& m);

double rho_abs_R(const QuadraticProblem& p);

}  // namespace minsum
