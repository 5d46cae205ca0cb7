#pragma once

#include <optional>
#include <vector>

#include "minsum/decomposition.hpp"
#include "minsum/problem.hpp"

namespace minsum {

struct SolverConfig {
    long max_iter = 100000;
    double tol_gamma = 1e-10;
    double tol_z = 1e-10;
    double tol_residual = 1e-8;

    /// Default iteration budget: 10 * n * diameter, in [1, 100000].
    static SolverConfig defaults_for(const QuadraticProblem& p);
};

enum class Status { Running, Converged, IllPosed, MaxIterReached };

const char* status_name(Status s);

struct SolverState {
    long t = 0;
    EdgeParams params;
    std::optional<Vec> x;           // present only when defined at every vertex
    std::optional<double> residual;
    Status status = Status::Running;
    int illposed_edge = -1;  // valid when status == IllPosed
    long illposed_t = -1;
};

/// One row per iteration; async runs carry the two extra columns.
struct TraceRow {
    long t;
    double dgamma, dz, residual;
    int illposed;
    long activated = 0;
    long staleness = 0;
};

struct Trace {
    std::vector<TraceRow> rows;
    bool async = false;
};

struct WellPosedReport {
    std::vector<int> violating_edges;     // sum over N(src)\head >= 1
    std::vector<int> violating_vertices;  // estimate denominator <= 0
    bool ok() const { return violating_edges.empty(); }
};

WellPosedReport check_well_posed(const QuadraticProblem& p, const Vec& gamma);

/// One quadratic-parameter sweep. Throws IllPosedError on a nonpositive
/// denominator.
Vec gamma_step(const QuadraticProblem& p, const Vec& gamma);

/// One linear-parameter sweep; uses the *pre-step* gamma, matching the joint
/// update order of run_sync.
Vec z_step(const QuadraticProblem& p, const Vec& gamma, const Vec& z);

struct Estimate {
    Vec x;
    std::vector<unsigned char> defined;
    bool all_defined = false;
};

/// Per-vertex estimate; vertices whose denominator is nonpositive come back
/// undefined rather than raising.
Estimate estimate(const QuadraticProblem& p, const Vec& gamma, const Vec& z);

struct SyncResult {
    SolverState state;
    Trace trace;
};

/// Synchronous joint iteration from the given initial decomposition.
/// Deterministic and single-threaded; convergence is declared on parameter
/// deltas, the residual is diagnostic.
SyncResult run_sync(const QuadraticProblem& p, const EdgeParams& init, const SolverConfig& cfg);

}  // namespace minsum
