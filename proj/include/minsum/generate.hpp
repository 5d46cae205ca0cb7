#pragma once

#include <cstdint>

#include "minsum/problem.hpp"

namespace minsum {

enum class GraphModel { Path, Cycle, Grid, Erdos };
enum class SignMode { Attractive, Mixed };

GraphModel parse_graph_model(const std::string& name);  // throws InvalidParamsError
SignMode parse_sign_mode(const std::string& name);

struct GenSpec {
    int n = 1;
    GraphModel model = GraphModel::Erdos;
    double target_rho = 0.5;  // in (0, 1)
    SignMode sign_mode = SignMode::Attractive;
    std::uint64_t seed = 0;
};

/// Connected instance with unit diagonal and couplings rescaled so the
/// off-diagonal weight matrix has spectral radius target_rho (up to the
/// power-iteration tolerance); positive definite by construction. Structured
/// models use unit coupling magnitudes before scaling, the random model draws
/// them. Throws InvalidParamsError.
RawProblem generate_instance(const GenSpec& spec);

}  // namespace minsum
