// Command-line front end: instance generation, solving (sync/async),
// decomposition certification, fixed-point/spectral analysis, and walk-sum
// diagnostics. Exit codes: 0 ok/converged, 1 usage or I/O, 2 ill-posed,
// 3 not walk-summable, 4 iteration budget exhausted.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "minsum/analysis.hpp"
#include "minsum/async_engine.hpp"
#include "minsum/decomposition.hpp"
#include "minsum/engine.hpp"
#include "minsum/errors.hpp"
#include "minsum/generate.hpp"
#include "minsum/io.hpp"
#include "minsum/walksum.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIllPosed = 2;
constexpr int kExitNotWalkSummable = 3;
constexpr int kExitMaxIter = 4;

struct CommonOpts {
    std::string instance;
    std::string schedule = "sync";
    std::string init = "zero";
    std::uint64_t seed = 0;
    double activation_prob = 1.0;
    int max_delay = 0;
    long max_iter = -1;  // -1 = derive from the instance
    double tol_gamma = 1e-10;
    double tol_z = 1e-10;
    double tol_residual = 1e-8;
    std::string trace_path;
    std::string report_path;
    std::string witness_path;
};

void add_tolerance_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--max-iter", o.max_iter, "iteration/tick budget (default: from instance)");
    cmd->add_option("--tol-gamma", o.tol_gamma, "quadratic-parameter delta tolerance");
    cmd->add_option("--tol-z", o.tol_z, "linear-parameter delta tolerance");
    cmd->add_option("--tol-residual", o.tol_residual, "diagnostic residual tolerance");
}

minsum::EdgeParams resolve_init(const std::string& spec, const minsum::QuadraticProblem& p) {
    if (spec == "zero") return minsum::EdgeParams::zeros(p);
    if (spec == "gamma-star") {
        minsum::EdgeParams out = minsum::EdgeParams::zeros(p);
        out.gamma = minsum::compute_gamma_star(p).gamma_star;
        return out;
    }
    if (spec.rfind("file:", 0) == 0) return minsum::load_params(spec.substr(5), p);
    throw minsum::InvalidParamsError("--init must be zero, gamma-star, or file:PATH");
}

minsum::Witness resolve_witness(const CommonOpts& o, const minsum::QuadraticProblem& p) {
    if (o.witness_path.empty()) return minsum::construct_witness(p);
    minsum::EdgeParams w = minsum::load_params(o.witness_path, p);
    minsum::ConvexityCheck c = minsum::is_convex_decomposition(p, w.gamma);
    if (!c.convex) throw minsum::InvalidWitnessError(c.violation);
    return minsum::Witness{w.gamma, c.margin};
}

int status_exit_code(minsum::Status s) {
    switch (s) {
        case minsum::Status::Converged: return kExitOk;
        case minsum::Status::IllPosed: return kExitIllPosed;
        case minsum::Status::MaxIterReached: return kExitMaxIter;
        case minsum::Status::Running: break;
    }
    return kExitUsage;
}

void write_report(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw minsum::IoError(path, "cannot open for writing");
    out << j.dump(2) << "\n";
}

int run_solve(const CommonOpts& o) {
    auto [p, rec] = minsum::normalize(minsum::load_problem(o.instance));
    minsum::EdgeParams init = resolve_init(o.init, p);

    minsum::Status status;
    minsum::Trace trace;
    std::optional<minsum::Vec> x;
    std::optional<double> res;
    long iterations = 0;
    int illposed_edge = -1;
    long illposed_t = -1;

    if (o.schedule == "sync") {
        minsum::SolverConfig cfg = minsum::SolverConfig::defaults_for(p);
        if (o.max_iter > 0) cfg.max_iter = o.max_iter;
        cfg.tol_gamma = o.tol_gamma;
        cfg.tol_z = o.tol_z;
        cfg.tol_residual = o.tol_residual;
        minsum::SyncResult r = minsum::run_sync(p, init, cfg);
        status = r.state.status;
        trace = std::move(r.trace);
        x = std::move(r.state.x);
        res = r.state.residual;
        iterations = r.state.t;
        illposed_edge = r.state.illposed_edge;
        illposed_t = r.state.illposed_t;
    } else if (o.schedule == "async") {
        minsum::AsyncConfig cfg =
            minsum::AsyncConfig::defaults_for(p, o.activation_prob, o.max_delay);
        cfg.seed = o.seed;
        if (o.max_iter > 0) cfg.max_ticks = o.max_iter;
        cfg.tol_gamma = o.tol_gamma;
        cfg.tol_z = o.tol_z;
        cfg.tol_residual = o.tol_residual;
        minsum::AsyncResult r = minsum::run_async(p, init, cfg);
        status = r.state.status;
        trace = std::move(r.trace);
        x = std::move(r.state.x);
        res = r.state.residual;
        iterations = r.state.t;
        illposed_edge = r.state.illposed_edge;
        illposed_t = r.state.illposed_t;
    } else {
        throw minsum::InvalidParamsError("--schedule must be sync or async");
    }

    if (!o.trace_path.empty()) minsum::save_trace(o.trace_path, trace);

    json rep;
    rep["status"] = minsum::status_name(status);
    rep["iterations"] = iterations;
    if (status == minsum::Status::IllPosed) {
        rep["illposed_edge"] = {p.src[illposed_edge], p.head[illposed_edge]};
        rep["illposed_t"] = illposed_t;
    }
    if (res) rep["residual"] = *res;
    if (x) {
        minsum::Vec x_raw = minsum::denormalize_solution(*x, rec);
        rep["x"] = x_raw;
        rep["objective"] = minsum::objective(p, *x);
    }
    write_report(o.report_path, rep);

    std::cout << "status: " << minsum::status_name(status) << "\n";
    std::cout << "iterations: " << iterations << "\n";
    if (status == minsum::Status::IllPosed)
        std::cout << "illposed edge: (" << p.src[illposed_edge] << " -> "
                  << p.head[illposed_edge] << ") at t " << illposed_t << "\n";
    if (res) std::cout << "residual: " << minsum::fmt_g17(*res) << "\n";
    if (x) {
        minsum::Vec x_raw = minsum::denormalize_solution(*x, rec);
        std::cout << "x:";
        for (double v : x_raw) std::cout << " " << minsum::fmt_g17(v);
        std::cout << "\n";
    }
    return status_exit_code(status);
}

int run_check(const CommonOpts& o) {
    auto [p, rec] = minsum::normalize(minsum::load_problem(o.instance));
    (void)rec;
    minsum::EdgeParams init = resolve_init(o.init, p);

    double rho = minsum::rho_abs_R(p);
    std::cout << "rho_abs_R: " << minsum::fmt_g17(rho) << "\n";
    if (rho >= 1.0) {
        std::cout << "walk_summable: no\n";
        return kExitNotWalkSummable;
    }
    std::cout << "walk_summable: yes\n";

    minsum::ConvexityCheck c = minsum::is_convex_decomposition(p, init.gamma);
    std::cout << "convex_decomposition: " << (c.convex ? "yes" : "no") << "\n";
    if (!c.convex)
        std::cout << "violation: " << c.violation << "\n";
    else
        std::cout << "margin: " << minsum::fmt_g17(c.margin) << "\n";

    minsum::Witness w = resolve_witness(o, p);
    bool dominated = minsum::is_convex_dominated(p, init.gamma, w);
    std::cout << (o.witness_path.empty() ? "dominated by default witness: "
                                         : "dominated by witness: ")
              << (dominated ? "yes" : "no") << "\n";
    std::cout << "witness_margin: " << minsum::fmt_g17(w.margin) << "\n";

    if (!o.report_path.empty()) {
        json rep;
        rep["rho_abs_R"] = rho;
        rep["walk_summable"] = true;
        rep["convex_decomposition"] = c.convex;
        if (!c.convex) rep["violation"] = c.violation;
        rep["dominated_by_witness"] = dominated;
        rep["witness_margin"] = w.margin;
        write_report(o.report_path, rep);
    }
    return kExitOk;
}

int run_analyze(const CommonOpts& o) {
    auto [p, rec] = minsum::normalize(minsum::load_problem(o.instance));
    (void)rec;

    double rho = minsum::rho_abs_R(p);
    if (rho >= 1.0) {
        std::cout << "rho_abs_R: " << minsum::fmt_g17(rho) << "\n";
        std::cout << "walk_summable: no\n";
        return kExitNotWalkSummable;
    }

    minsum::Witness w = minsum::construct_witness(p);
    minsum::FixedPointResult fp = minsum::compute_gamma_star(p);
    double rho_a = 0.0;
    if (p.edge_count() > 0) {
        minsum::EdgeOperatorMatrices ops = minsum::build_A_D(p, fp.gamma_star);
        rho_a = minsum::spectral_radius(minsum::abs_matrix(ops.A));
    }
    minsum::ZFixed zf = minsum::z_fixed(p, fp.gamma_star);
    double x_res = minsum::residual(p, zf.x_infinity);

    double gmin = 0.0, gmax = 0.0;
    if (!fp.gamma_star.empty()) {
        gmin = *std::min_element(fp.gamma_star.begin(), fp.gamma_star.end());
        gmax = *std::max_element(fp.gamma_star.begin(), fp.gamma_star.end());
    }

    json rep;
    rep["rho_abs_R"] = rho;
    rep["rho_abs_A"] = rho_a;
    rep["gamma_star"] = {{"min", gmin}, {"max", gmax}, {"iterations", fp.iterations}};
    rep["witness_margin"] = w.margin;
    rep["x_infinity_residual"] = x_res;
    std::cout << rep.dump(2) << "\n";
    write_report(o.report_path, rep);
    return kExitOk;
}

int run_walksum(const CommonOpts& o, int pair_i, int pair_r, int depth) {
    auto [p, rec] = minsum::normalize(minsum::load_problem(o.instance));
    (void)rec;
    if (minsum::rho_abs_R(p) >= 1.0) {
        std::cout << "walk_summable: no\n";
        return kExitNotWalkSummable;
    }
    minsum::Vec gs = minsum::compute_gamma_star(p).gamma_star;

    std::vector<std::pair<int, int>> pairs;
    if (pair_i >= 0 && pair_r >= 0) {
        pairs.emplace_back(pair_i, pair_r);
    } else {
        if (p.n > 8)
            throw minsum::InvalidParamsError(
                "full pair table needs n <= 8; pass --i/--r for a single pair");
        for (int i = 0; i < p.n; ++i)
            for (int r = 0; r < p.n; ++r) pairs.emplace_back(i, r);
    }

    std::cout << "i,r,lhs,rhs,discrepancy,lhs_bound,rhs_bound,pass\n";
    bool all_pass = true;
    for (auto [i, r] : pairs) {
        int d = depth;
        for (;;) {
            try {
                minsum::NbIdentityReport rep = minsum::verify_nb_identity(p, gs, i, r, d);
                std::cout << i << "," << r << "," << minsum::fmt_g17(rep.lhs) << ","
                          << minsum::fmt_g17(rep.rhs) << ","
                          << minsum::fmt_g17(rep.discrepancy) << ","
                          << minsum::fmt_g17(rep.lhs_bound) << ","
                          << minsum::fmt_g17(rep.rhs_bound) << "," << rep.pass << "\n";
                all_pass = all_pass && rep.pass;
                break;
            } catch (const minsum::EnumerationBudgetExceededError&) {
                if (d <= 1) throw;
                d -= 2;  // retry shallower
            }
        }
    }

    if (p.edge_count() > 0) {
        int e = 0;
        minsum::SelfReturnReport sr =
            minsum::verify_self_return(p, gs, p.src[e], p.head[e], depth);
        std::cout << "self_return depth " << sr.depth << ": max|gamma_d - gamma*| = "
                  << minsum::fmt_g17(sr.max_diff) << (sr.pass ? " (pass)" : " (fail)")
                  << "\n";
        all_pass = all_pass && sr.pass;
    }
    return all_pass ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"min-sum message-passing solver for sparse quadratic objectives"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a walk-summable instance");
    int gen_n = 1;
    std::string gen_model = "erdos", gen_sign = "attractive", gen_out;
    double gen_rho = 0.5;
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--model", gen_model, "path|cycle|grid|erdos");
    gen->add_option("--target-rho", gen_rho, "spectral radius of |R| in (0,1)");
    gen->add_option("--sign-mode", gen_sign, "attractive|mixed");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out,-o", gen_out, "output instance path")->required();

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd, bool with_schedule) {
        cmd->add_option("instance", o.instance, "instance file")->required();
        cmd->add_option("--init", o.init, "zero|gamma-star|file:PATH");
        cmd->add_option("--report", o.report_path, "write a JSON report here");
        if (with_schedule) {
            cmd->add_option("--schedule", o.schedule, "sync|async");
            cmd->add_option("--seed", o.seed, "async schedule seed");
            cmd->add_option("--activation-prob", o.activation_prob,
                            "async per-tick activation probability");
            cmd->add_option("--max-delay", o.max_delay, "async max delivery delay (ticks)");
            cmd->add_option("--trace", o.trace_path, "write the iteration trace here");
            add_tolerance_flags(cmd, o);
        }
    };

    auto* solve = app.add_subcommand("solve", "run the message-passing solver");
    add_common(solve, true);

    auto* check = app.add_subcommand("check", "certify a decomposition");
    add_common(check, false);
    check->add_option("--witness", o.witness_path, "witness file (default: constructed)");

    auto* analyze = app.add_subcommand("analyze", "fixed-point and spectral diagnostics");
    add_common(analyze, false);

    auto* walks = app.add_subcommand("walksum", "walk-sum identity verification");
    add_common(walks, false);
    int wi = -1, wr = -1, wdepth = 10;
    walks->add_option("--i", wi, "walk start vertex (default: all pairs)");
    walks->add_option("--r", wr, "walk end vertex");
    walks->add_option("--depth", wdepth, "non-backtracking enumeration depth");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            minsum::GenSpec spec;
            spec.n = gen_n;
            spec.model = minsum::parse_graph_model(gen_model);
            spec.target_rho = gen_rho;
            spec.sign_mode = minsum::parse_sign_mode(gen_sign);
            spec.seed = gen_seed;
            minsum::save_instance(gen_out, minsum::generate_instance(spec));
            std::cout << "wrote " << gen_out << "\n";
            return kExitOk;
        }
        if (solve->parsed()) return run_solve(o);
        if (check->parsed()) return run_check(o);
        if (analyze->parsed()) return run_analyze(o);
        if (walks->parsed()) return run_walksum(o, wi, wr, wdepth);
    } catch (const minsum::NotWalkSummableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotWalkSummable;
    } catch (const minsum::IllPosedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIllPosed;
    } catch (const minsum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
