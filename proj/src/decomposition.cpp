#include "minsum/decomposition.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "minsum/analysis.hpp"
#include "minsum/errors.hpp"

namespace minsum {

namespace {

void require_edge_sized(const QuadraticProblem& p, const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != p.directed_count())
        throw LengthMismatchError(std::string(what) + " has " + std::to_string(v.size()) +
                                  " entries for " + std::to_string(p.directed_count()) +
                                  " directed edges");
}

std::string edge_label(const QuadraticProblem& p, int e) {
    return "(" + std::to_string(p.src[e]) + "->" + std::to_string(p.head[e]) + ")";
}

}  // namespace

ConvexityCheck is_convex_decomposition(const QuadraticProblem& p, const Vec& gamma) {
    require_edge_sized(p, gamma, "gamma");
    ConvexityCheck c;
    c.margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p.edge_count(); ++k) {
        int e = 2 * k;
        if (gamma[e] < 0.0 || gamma[e + 1] < 0.0) {
            int bad = gamma[e] < 0.0 ? e : e + 1;
            c.violation = "negative quadratic parameter at edge " + edge_label(p, bad);
            return c;
        }
        double pairwise = p.w2[e] * gamma[e] * gamma[e + 1];
        if (pairwise < 1.0) {
            c.violation = "pairwise convexity fails at edge (" +
                          std::to_string(p.edges[k].first) + "," +
                          std::to_string(p.edges[k].second) +
                          "): coupling^2*g_ij*g_ji = " + fmt_g17(pairwise);
            return c;
        }
        c.margin = std::min(c.margin, pairwise);
    }
    Vec gsum(p.n, 0.0);
    for (int e = 0; e < p.directed_count(); ++e)
        gsum[p.head[e]] += p.w2[e] * gamma[e];
    for (int v = 0; v < p.n; ++v) {
        double slack = 1.0 - gsum[v];
        if (!(slack > 0.0)) {
            c.violation = "vertex function not strictly convex at vertex " +
                          std::to_string(v) + ": slack = " + fmt_g17(slack);
            return c;
        }
        c.margin = std::min(c.margin, slack);
    }
    c.convex = true;
    return c;
}

bool is_convex_dominated(const QuadraticProblem& p, const Vec& gamma0, const Witness& w) {
    require_edge_sized(p, gamma0, "gamma0");
    require_edge_sized(p, w.v, "witness");
    ConvexityCheck wc = is_convex_decomposition(p, w.v);
    if (!wc.convex) throw InvalidWitnessError(wc.violation);
    for (int e = 0; e < p.directed_count(); ++e)
        if (gamma0[e] > w.v[e]) return false;
    return true;
}

Witness construct_witness(const QuadraticProblem& p) {
    double rho = rho_abs_R(p);
    if (rho >= 1.0) throw NotWalkSummableError(rho);

    // (I - |R|) w = 1; the inverse is the entrywise-nonnegative series sum,
    // so w >= 1 componentwise.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p.n, p.n);
    for (int k = 0; k < p.edge_count(); ++k) {
        auto [i, j] = p.edges[k];
        double a = std::fabs(p.coupling[2 * k]);
        m(i, j) = -a;
        m(j, i) = -a;
    }
    Eigen::VectorXd w = m.llt().solve(Eigen::VectorXd::Ones(p.n));
    for (int i = 0; i < p.n; ++i)
        if (!(w[i] >= 1.0 - 1e-9))
            throw Error("walk-weight solve produced w[" + std::to_string(i) +
                        "] = " + fmt_g17(w[i]) + " < 1");

    // The raw v has coupling^2*v_ij*v_ji = 1 only up to rounding; scale up a
    // few ulps so the certificate inequality holds as stated.
    const double lift = 1.0 + 16.0 * std::numeric_limits<double>::epsilon();
    Witness out;
    out.v.resize(p.directed_count());
    for (int e = 0; e < p.directed_count(); ++e) {
        double a = std::fabs(p.coupling[e]);
        out.v[e] = (w[p.src[e]] / (a * w[p.head[e]])) * lift;
    }
    ConvexityCheck c = is_convex_decomposition(p, out.v);
    if (!c.convex) throw Error("constructed witness failed its certificate: " + c.violation);
    out.margin = c.margin;
    return out;
}

EdgeParams from_messages(const QuadraticProblem& p, const EdgeParams& base,
                         const InitialMessages& msgs) {
    require_edge_sized(p, base.gamma, "base gamma");
    require_edge_sized(p, base.z, "base z");
    require_edge_sized(p, msgs.a, "message a");
    require_edge_sized(p, msgs.b, "message b");
    EdgeParams out;
    out.gamma.resize(p.directed_count());
    out.z.resize(p.directed_count());
    for (int e = 0; e < p.directed_count(); ++e) {
        out.gamma[e] = base.gamma[e] - msgs.a[e] / p.w2[e];
        out.z[e] = base.z[e] - msgs.b[e];
    }
    return out;
}

ComponentFunctions component_functions(const QuadraticProblem& p, const EdgeParams& params) {
    require_edge_sized(p, params.gamma, "gamma");
    require_edge_sized(p, params.z, "z");
    ComponentFunctions cf;
    cf.vertex.resize(p.n);
    cf.edge.resize(p.edge_count());
    Vec gsum(p.n, 0.0), zsum(p.n, 0.0);
    for (int e = 0; e < p.directed_count(); ++e) {
        gsum[p.head[e]] += p.w2[e] * params.gamma[e];
        zsum[p.head[e]] += params.z[e];
    }
    for (int v = 0; v < p.n; ++v)
        cf.vertex[v] = {1.0 - gsum[v], -(p.h[v] - zsum[v])};
    for (int k = 0; k < p.edge_count(); ++k) {
        int ij = 2 * k, ji = 2 * k + 1;
        cf.edge[k] = {
            p.w2[ij] * params.gamma[ji],  // x_i^2 side carries gamma_ji
            p.w2[ij] * params.gamma[ij],
            p.coupling[ij],
            -params.z[ji],
            -params.z[ij],
        };
    }
    return cf;
}

}  // namespace minsum
