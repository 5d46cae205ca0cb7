#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "minsum/engine.hpp"

namespace minsum {

/// Configuration of the discrete-event simulation of the totally-asynchronous
/// iteration. Every vertex activates independently with activation_prob per
/// tick; a round-robin fallback forces any vertex silent for a full window
/// (ceil(2/activation_prob) * n ticks), so activation sets stay infinite in
/// the limit the simulation approximates.
struct AsyncConfig {
    std::uint64_t seed = 0;
    double activation_prob = 1.0;  // in (0, 1]
    int max_delay = 0;             // ticks, inclusive upper bound on delivery delay
    long max_ticks = 100000;
    double tol_gamma = 1e-10;
    double tol_z = 1e-10;
    double tol_residual = 1e-8;
    bool record_deliveries = false;  // keep a full delivery log in the meta

    long activation_window(int n) const;

    /// Baseline config with a tick budget sized for the schedule sparsity.
    static AsyncConfig defaults_for(const QuadraticProblem& p, double activation_prob = 1.0,
                                    int max_delay = 0);
};

/// Receiver-side view of one directed channel: freshest value seen and the
/// send version it corresponds to.
struct ChannelValue {
    long version = 0;  // sender state index; a message sent at tick s carries s+1
    double gamma = 0.0;
    double z = 0.0;
};

struct DeliveryRecord {
    int edge;
    long send_tick, delivery_tick;
    double gamma, z;
};

struct ScheduleMeta {
    long window = 0;
    long ticks = 0;
    long activations = 0;
    long forced_activations = 0;
    long max_activation_gap = 0;
    long delivered = 0;
    long stale_discarded = 0;  // out-of-order arrivals superseded before delivery
    long undelivered_at_end = 0;
    long max_delivery_delay = 0;
    long max_staleness = 0;  // max over uses of (tick - version of value consumed)
    std::vector<DeliveryRecord> deliveries;  // only when record_deliveries
};

struct AsyncResult {
    SolverState state;
    Trace trace;
    ScheduleMeta meta;
};

using TickObserver = std::function<void(long tick, const EdgeParams&)>;

/// Deterministic simulation: given identical problem, init and config the
/// trace is bit-identical. With activation_prob = 1 and max_delay = 0 it
/// reproduces run_sync tick for tick.
AsyncResult run_async(const QuadraticProblem& p, const EdgeParams& init,
                      const AsyncConfig& cfg, const TickObserver& observer = {});

struct ScheduleReport {
    bool window_ok = false;    // every vertex active within every window
    bool delivery_ok = false;  // all messages delivered within max_delay
    bool drained = false;      // nothing left in flight at termination
    long max_staleness = 0;
    long forced_activations = 0;
    bool ok() const { return window_ok && delivery_ok && drained; }
};

ScheduleReport validate_schedule(const ScheduleMeta& meta, const AsyncConfig& cfg);

}  // namespace minsum
