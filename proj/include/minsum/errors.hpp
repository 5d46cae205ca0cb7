#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace minsum {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveDiagonalError : Error {
    int vertex;
    explicit NonPositiveDiagonalError(int v, double value)
        : Error("diagonal entry at vertex " + std::to_string(v) +
                " is not strictly positive (" + std::to_string(value) + ")"),
          vertex(v) {}
};

struct DisconnectedGraphError : Error {
    std::vector<std::vector<int>> components;
    explicit DisconnectedGraphError(std::vector<std::vector<int>> comps)
        : Error("graph is disconnected (" + std::to_string(comps.size()) + " components)"),
          components(std::move(comps)) {}
};

struct LengthMismatchError : Error {
    explicit LengthMismatchError(const std::string& what_len)
        : Error("length mismatch: " + what_len) {}
};

struct ParseError : Error {
    long line;
    ParseError(const std::string& path, long line_no, const std::string& detail)
        : Error(path + ":" + std::to_string(line_no) + ": " + detail), line(line_no) {}
};

struct IoError : Error {
    explicit IoError(const std::string& path, const std::string& detail)
        : Error(path + ": " + detail) {}
};

struct NotPositiveDefiniteError : Error {
    double min_eigenvalue;
    explicit NotPositiveDefiniteError(double min_eig)
        : Error("matrix is not positive definite (min eigenvalue " +
                std::to_string(min_eig) + ")"),
          min_eigenvalue(min_eig) {}
};

struct MissingEdgeValueError : Error {
    int i, j;
    MissingEdgeValueError(int i_, int j_)
        : Error("no directed edge (" + std::to_string(i_) + " -> " + std::to_string(j_) + ")"),
          i(i_), j(j_) {}
};

struct InvalidWitnessError : Error {
    explicit InvalidWitnessError(const std::string& detail)
        : Error("invalid witness: " + detail) {}
};

struct NotWalkSummableError : Error {
    double rho;
    explicit NotWalkSummableError(double rho_)
        : Error("not walk-summable: rho(|R|) = " + std::to_string(rho_)), rho(rho_) {}
};

struct SpectralRadiusTooLargeError : Error {
    double rho;
    explicit SpectralRadiusTooLargeError(double rho_)
        : Error("spectral radius too large: rho(|A|) = " + std::to_string(rho_)), rho(rho_) {}
};

struct IllPosedError : Error {
    int edge;
    long t;
    IllPosedError(int edge_, long t_)
        : Error("ill-posed update at directed edge " + std::to_string(edge_) +
                ", iteration " + std::to_string(t_)),
          edge(edge_), t(t_) {}
};

struct NoConvergenceError : Error {
    double last, previous;
    NoConvergenceError(double last_, double prev_)
        : Error("iteration did not converge (last two quotients " +
                std::to_string(prev_) + ", " + std::to_string(last_) + ")"),
          last(last_), previous(prev_) {}
};

struct EnumerationBudgetExceededError : Error {
    long budget;
    explicit EnumerationBudgetExceededError(long budget_)
        : Error("walk enumeration exceeded node budget " + std::to_string(budget_)),
          budget(budget_) {}
};

struct InvalidWalkError : Error {
    explicit InvalidWalkError(const std::string& detail) : Error("invalid walk: " + detail) {}
};

struct BacktrackingWalkError : Error {
    explicit BacktrackingWalkError(int at)
        : Error("walk backtracks at position " + std::to_string(at)) {}
};

struct InvalidParamsError : Error {
    explicit InvalidParamsError(const std::string& detail) : Error(detail) {}
};

}  // namespace minsum
