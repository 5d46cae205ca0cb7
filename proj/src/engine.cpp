#include "minsum/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minsum/errors.hpp"
#include "minsum/kernels.hpp"

namespace minsum {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require_edge_sized(const QuadraticProblem& p, const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != p.directed_count())
        throw LengthMismatchError(std::string(what) + " has " + std::to_string(v.size()) +
                                  " entries for " + std::to_string(p.directed_count()) +
                                  " directed edges");
}

// Scratch shared across iterations so the hot loop does not allocate.
struct Sweep {
    Vec gsum, zsum, gnext, znext, x;
    std::vector<unsigned char> defined;

    explicit Sweep(const QuadraticProblem& p)
        : gsum(p.n), zsum(p.n), gnext(p.directed_count()), znext(p.directed_count()),
          x(p.n), defined(p.n) {}
};

double sparse_residual(const QuadraticProblem& p, const Vec& x) {
    Vec acc(p.n, 0.0);
    for (int e = 0; e < p.directed_count(); ++e)
        acc[p.head[e]] += p.coupling[e] * x[p.src[e]];
    double r = 0.0;
    for (int v = 0; v < p.n; ++v) r = std::max(r, std::fabs(x[v] + acc[v] - p.h[v]));
    return r;
}

}  // namespace

const char* status_name(Status s) {
    switch (s) {
        case Status::Running: return "running";
        case Status::Converged: return "converged";
        case Status::IllPosed: return "ill-posed";
        case Status::MaxIterReached: return "max-iter";
    }
    return "?";
}

SolverConfig SolverConfig::defaults_for(const QuadraticProblem& p) {
    SolverConfig cfg;
    // Dense graphs have tiny diameters but still need ~log(tol)/log(rate)
    // sweeps for the linear parameters, hence the floor.
    long budget = 10L * p.n * diameter(p);
    cfg.max_iter = std::clamp(budget, 1000L, 100000L);
    return cfg;
}

WellPosedReport check_well_posed(const QuadraticProblem& p, const Vec& gamma) {
    require_edge_sized(p, gamma, "gamma");
    int m = p.directed_count();
    Vec gsum(p.n);
    kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                gsum.data(), p.n);
    WellPosedReport r;
    for (int e = 0; e < m; ++e) {
        double excl = gsum[p.src[e]] - p.w2[e] * gamma[e ^ 1];
        if (!(1.0 - excl > 0.0)) r.violating_edges.push_back(e);
    }
    for (int v = 0; v < p.n; ++v)
        if (!(1.0 - gsum[v] > 0.0)) r.violating_vertices.push_back(v);
    return r;
}

Vec gamma_step(const QuadraticProblem& p, const Vec& gamma) {
    require_edge_sized(p, gamma, "gamma");
    int m = p.directed_count();
    Vec gsum(p.n), out(m);
    kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                gsum.data(), p.n);
    int bad = kernels::active_kernels().gamma_update(p.src.data(), p.w2.data(),
                                                     gamma.data(), gsum.data(),
                                                     out.data(), m);
    if (bad >= 0) throw IllPosedError(bad, 0);
    return out;
}

Vec z_step(const QuadraticProblem& p, const Vec& gamma, const Vec& z) {
    require_edge_sized(p, gamma, "gamma");
    require_edge_sized(p, z, "z");
    int m = p.directed_count();
    Vec gsum(p.n), zsum(p.n), out(m);
    kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                gsum.data(), p.n);
    kernels::accumulate_head(p.head.data(), z.data(), m, zsum.data(), p.n);
    int bad = kernels::active_kernels().z_update(
        p.src.data(), p.coupling.data(), p.w2.data(), gamma.data(), z.data(),
        gsum.data(), zsum.data(), p.h.data(), out.data(), m);
    if (bad >= 0) throw IllPosedError(bad, 0);
    return out;
}

Estimate estimate(const QuadraticProblem& p, const Vec& gamma, const Vec& z) {
    require_edge_sized(p, gamma, "gamma");
    require_edge_sized(p, z, "z");
    int m = p.directed_count();
    Vec gsum(p.n), zsum(p.n);
    kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                gsum.data(), p.n);
    kernels::accumulate_head(p.head.data(), z.data(), m, zsum.data(), p.n);
    Estimate est;
    est.x.resize(p.n);
    est.defined.resize(p.n);
    kernels::active_kernels().estimate(p.h.data(), gsum.data(), zsum.data(),
                                       est.x.data(), est.defined.data(), p.n);
    est.all_defined =
        std::all_of(est.defined.begin(), est.defined.end(), [](unsigned char d) { return d; });
    return est;
}

SyncResult run_sync(const QuadraticProblem& p, const EdgeParams& init,
                    const SolverConfig& cfg) {
    require_edge_sized(p, init.gamma, "init gamma");
    require_edge_sized(p, init.z, "init z");

    const auto& kern = kernels::active_kernels();
    const int m = p.directed_count();
    Sweep ws(p);

    SyncResult result;
    result.state.params = init;
    Vec& gamma = result.state.params.gamma;
    Vec& z = result.state.params.z;

    kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                ws.gsum.data(), p.n);
    kernels::accumulate_head(p.head.data(), z.data(), m, ws.zsum.data(), p.n);

    result.state.status = Status::MaxIterReached;
    for (long t = 0; t < cfg.max_iter; ++t) {
        int bad = kern.gamma_update(p.src.data(), p.w2.data(), gamma.data(),
                                    ws.gsum.data(), ws.gnext.data(), m);
        if (bad < 0)
            bad = kern.z_update(p.src.data(), p.coupling.data(), p.w2.data(),
                                gamma.data(), z.data(), ws.gsum.data(), ws.zsum.data(),
                                p.h.data(), ws.znext.data(), m);
        if (bad >= 0) {
            result.state.status = Status::IllPosed;
            result.state.illposed_edge = bad;
            result.state.illposed_t = t;
            result.state.t = t;
            result.trace.rows.push_back({t, kNan, kNan, kNan, 1});
            return result;
        }

        double dgamma = kern.max_abs_diff(ws.gnext.data(), gamma.data(), m);
        double dz = kern.max_abs_diff(ws.znext.data(), z.data(), m);
        gamma.swap(ws.gnext);
        z.swap(ws.znext);

        kernels::accumulate_head_w2(p.head.data(), p.w2.data(), gamma.data(), m,
                                    ws.gsum.data(), p.n);
        kernels::accumulate_head(p.head.data(), z.data(), m, ws.zsum.data(), p.n);
        kern.estimate(p.h.data(), ws.gsum.data(), ws.zsum.data(), ws.x.data(),
                      ws.defined.data(), p.n);
        bool all_defined = std::all_of(ws.defined.begin(), ws.defined.end(),
                                       [](unsigned char d) { return d != 0; });
        double res = all_defined ? sparse_residual(p, ws.x) : kNan;

        result.trace.rows.push_back({t, dgamma, dz, res, 0});
        result.state.t = t + 1;

        if (dgamma <= cfg.tol_gamma && dz <= cfg.tol_z) {
            result.state.status = Status::Converged;
            if (all_defined) {
                result.state.x = ws.x;
                result.state.residual = res;
            }
            return result;
        }
    }

    // Out of budget: still report the last estimate when it is defined.
    Estimate est = estimate(p, gamma, z);
    if (est.all_defined) {
        result.state.residual = sparse_residual(p, est.x);
        result.state.x = std::move(est.x);
    }
    return result;
}

}  // namespace minsum
