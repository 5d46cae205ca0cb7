#include "minsum/async_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minsum/errors.hpp"
#include "minsum/kernels.hpp"
#include "minsum/rng.hpp"

namespace minsum {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Message {
    int edge;
    long send_tick;
    long version;
    double gamma, z;
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

long AsyncConfig::activation_window(int n) const {
    return static_cast<long>(std::ceil(2.0 / activation_prob)) * n;
}

AsyncConfig AsyncConfig::defaults_for(const QuadraticProblem& p, double activation_prob,
                                      int max_delay) {
    AsyncConfig cfg;
    cfg.activation_prob = activation_prob;
    cfg.max_delay = max_delay;
    SolverConfig sync = SolverConfig::defaults_for(p);
    long per_round = static_cast<long>(std::ceil(1.0 / activation_prob));
    cfg.max_ticks = std::clamp(sync.max_iter * per_round * (max_delay + 1),
                               1000L, 1000000L);
    return cfg;
}

AsyncResult run_async(const QuadraticProblem& p, const EdgeParams& init,
                      const AsyncConfig& cfg, const TickObserver& observer) {
    if (static_cast<int>(init.gamma.size()) != p.directed_count() ||
        static_cast<int>(init.z.size()) != p.directed_count())
        throw LengthMismatchError("init parameters vs directed edges");
    if (!(cfg.activation_prob > 0.0 && cfg.activation_prob <= 1.0))
        throw InvalidParamsError("activation_prob must be in (0, 1]");
    if (cfg.max_delay < 0 || cfg.max_ticks < 1)
        throw InvalidParamsError("max_delay must be >= 0 and max_ticks >= 1");

    const int n = p.n;
    const int m = p.directed_count();
    const long window = cfg.activation_window(n);
    // One quiescent tick proves a fixed point only if every vertex is
    // guaranteed to have acted on fresh data within it; otherwise a full
    // activation window plus the delivery horizon has to stay quiet.
    const long required_quiet =
        (cfg.activation_prob >= 1.0 ? 1L : window) + cfg.max_delay;

    AsyncResult result;
    result.trace.async = true;
    result.meta.window = window;
    result.state.params = init;
    Vec& gamma = result.state.params.gamma;
    Vec& z = result.state.params.z;

    std::vector<ChannelValue> lastrecv(m);
    for (int e = 0; e < m; ++e) lastrecv[e] = {0, init.gamma[e], init.z[e]};

    const int ring = cfg.max_delay + 2;
    std::vector<std::vector<Message>> buckets(ring);

    Rng rng(cfg.seed);
    std::vector<long> last_act(n, -1);
    std::vector<unsigned char> active(n);
    Vec prev_gamma(m), prev_z(m);
    Vec x(n);
    std::vector<unsigned char> defined(n);
    const auto& kern = kernels::active_kernels();

    long quiet = 0;
    result.state.status = Status::MaxIterReached;

    for (long t = 0; t < cfg.max_ticks; ++t) {
        result.meta.ticks = t + 1;

        // Delivery phase: everything scheduled for this tick, emission order.
        auto& due = buckets[t % ring];
        for (const Message& msg : due) {
            ++result.meta.delivered;
            result.meta.max_delivery_delay =
                std::max(result.meta.max_delivery_delay, t - 1 - msg.send_tick);
            if (msg.version > lastrecv[msg.edge].version)
                lastrecv[msg.edge] = {msg.version, msg.gamma, msg.z};
            else
                ++result.meta.stale_discarded;
            if (cfg.record_deliveries)
                result.meta.deliveries.push_back(
                    {msg.edge, msg.send_tick, t, msg.gamma, msg.z});
        }
        due.clear();

        prev_gamma = gamma;
        prev_z = z;

        // Activation decisions; the Bernoulli draw is consumed for every
        // vertex every tick so the stream does not depend on the schedule.
        long activated = 0;
        for (int v = 0; v < n; ++v) {
            bool drawn = rng.bernoulli(cfg.activation_prob);
            bool forced = (t - last_act[v]) >= window;
            active[v] = drawn || forced;
            if (active[v]) {
                if (forced && !drawn) ++result.meta.forced_activations;
                result.meta.max_activation_gap =
                    std::max(result.meta.max_activation_gap, t - last_act[v]);
                last_act[v] = t;
                ++activated;
                ++result.meta.activations;
            }
        }

        long tick_staleness = 0;
        int illposed_edge = -1;
        for (int v = 0; v < n && illposed_edge < 0; ++v) {
            if (!active[v]) continue;
            // Received-value sums over incoming channels, in the same order
            // as the synchronous scatter so degenerate schedules match it
            // bit for bit.
            double sv = 0.0, zv = 0.0;
            for (auto [u, k] : p.adj[v]) {
                int f = p.edges[k].first == u ? 2 * k : 2 * k + 1;  // u -> v
                sv += p.w2[f] * lastrecv[f].gamma;
                zv += lastrecv[f].z;
                tick_staleness = std::max(tick_staleness, t - lastrecv[f].version);
            }
            for (auto [u, k] : p.adj[v]) {
                int e = p.edges[k].first == v ? 2 * k : 2 * k + 1;  // v -> u
                int f = e ^ 1;
                double excl = sv - p.w2[e] * lastrecv[f].gamma;
                double den = 1.0 - excl;
                if (!(den > 0.0)) {
                    illposed_edge = e;
                    break;
                }
                double num = p.h[v] - (zv - lastrecv[f].z);
                gamma[e] = 1.0 / den;
                z[e] = p.coupling[e] * num / den;
            }
            if (illposed_edge >= 0) break;
            for (auto [u, k] : p.adj[v]) {
                int e = p.edges[k].first == v ? 2 * k : 2 * k + 1;
                long delay = cfg.max_delay > 0 ? rng.uniform_int(0, cfg.max_delay) : 0;
                long delivery = t + 1 + delay;
                buckets[delivery % ring].push_back({e, t, t + 1, gamma[e], z[e]});
            }
        }
        result.meta.max_staleness = std::max(result.meta.max_staleness, tick_staleness);

        if (illposed_edge >= 0) {
            result.state.status = Status::IllPosed;
            result.state.illposed_edge = illposed_edge;
            result.state.illposed_t = t;
            result.state.t = t;
            result.trace.rows.push_back({t, kNan, kNan, kNan, 1, activated, tick_staleness});
            for (auto& b : buckets) result.meta.undelivered_at_end += b.size();
            if (observer) observer(t, result.state.params);
            return result;
        }

        double dgamma = kern.max_abs_diff(gamma.data(), prev_gamma.data(), m);
        double dz = kern.max_abs_diff(z.data(), prev_z.data(), m);

        Estimate est = estimate(p, gamma, z);
        double res = est.all_defined ? sparse_residual(p, est.x) : kNan;
        result.trace.rows.push_back({t, dgamma, dz, res, 0, activated, tick_staleness});
        result.state.t = t + 1;
        if (observer) observer(t, result.state.params);

        quiet = (dgamma <= cfg.tol_gamma && dz <= cfg.tol_z) ? quiet + 1 : 0;
        if (quiet >= required_quiet) {
            result.state.status = Status::Converged;
            // Drain what is still in flight; by quiescence none of it can
            // carry anything new, it is delivered for accounting only.
            for (long dt = 1; dt <= cfg.max_delay + 1; ++dt) {
                auto& late = buckets[(t + dt) % ring];
                for (const Message& msg : late) {
                    ++result.meta.delivered;
                    result.meta.max_delivery_delay = std::max(
                        result.meta.max_delivery_delay, t + dt - 1 - msg.send_tick);
                    if (msg.version > lastrecv[msg.edge].version)
                        lastrecv[msg.edge] = {msg.version, msg.gamma, msg.z};
                    else
                        ++result.meta.stale_discarded;
                    if (cfg.record_deliveries)
                        result.meta.deliveries.push_back(
                            {msg.edge, msg.send_tick, t + dt, msg.gamma, msg.z});
                }
                late.clear();
            }
            break;
        }
    }

    for (auto& b : buckets) result.meta.undelivered_at_end += b.size();

    Estimate est = estimate(p, gamma, z);
    if (est.all_defined) {
        result.state.residual = sparse_residual(p, est.x);
        result.state.x = std::move(est.x);
    }
    return result;
}

ScheduleReport validate_schedule(const ScheduleMeta& meta, const AsyncConfig& cfg) {
    ScheduleReport r;
    r.window_ok = meta.max_activation_gap <= meta.window;
    r.delivery_ok = meta.max_delivery_delay <= cfg.max_delay;
    r.drained = meta.undelivered_at_end == 0;
    r.max_staleness = meta.max_staleness;
    r.forced_activations = meta.forced_activations;
    return r;
}

}  // namespace minsum
