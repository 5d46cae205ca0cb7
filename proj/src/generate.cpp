#include "minsum/generate.hpp"

#include <cmath>

#include "minsum/analysis.hpp"
#include "minsum/errors.hpp"
#include "minsum/rng.hpp"

namespace minsum {

GraphModel parse_graph_model(const std::string& name) {
    if (name == "path") return GraphModel::Path;
    if (name == "cycle") return GraphModel::Cycle;
    if (name == "grid") return GraphModel::Grid;
    if (name == "erdos") return GraphModel::Erdos;
    throw InvalidParamsError("unknown graph model '" + name + "'");
}

SignMode parse_sign_mode(const std::string& name) {
    if (name == "attractive") return SignMode::Attractive;
    if (name == "mixed") return SignMode::Mixed;
    throw InvalidParamsError("unknown sign mode '" + name + "'");
}

RawProblem generate_instance(const GenSpec& spec) {
    if (spec.n < 1) throw InvalidParamsError("n must be >= 1");
    if (!(spec.target_rho > 0.0 && spec.target_rho < 1.0))
        throw InvalidParamsError("target_rho must be in (0, 1)");

    Rng rng(spec.seed);
    const int n = spec.n;
    std::vector<std::pair<int, int>> edges;

    switch (spec.model) {
        case GraphModel::Path:
            for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            break;
        case GraphModel::Cycle:
            for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            if (n >= 3) edges.emplace_back(0, n - 1);
            break;
        case GraphModel::Grid: {
            int rows = std::max(1, static_cast<int>(std::floor(std::sqrt(n))));
            int cols = (n + rows - 1) / rows;
            for (int v = 0; v < n; ++v) {
                int r = v / cols, c = v % cols;
                if (c + 1 < cols && v + 1 < n) edges.emplace_back(v, v + 1);
                if ((r + 1) * cols + c < n) edges.emplace_back(v, (r + 1) * cols + c);
            }
            break;
        }
        case GraphModel::Erdos: {
            // random recursive tree keeps it connected, then extra pairs
            std::vector<std::vector<unsigned char>> present(
                n, std::vector<unsigned char>(n, 0));
            for (int v = 1; v < n; ++v) {
                int parent = static_cast<int>(rng.below(v));
                present[parent][v] = 1;
            }
            double p_extra = std::min(1.0, 4.0 / n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (present[i][j]) continue;
                    if (rng.bernoulli(p_extra)) present[i][j] = 1;
                }
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (present[i][j]) edges.emplace_back(i, j);
            break;
        }
    }

    // Off-diagonal weights: unit magnitude for the structured models, drawn
    // for the random one, signed per the mode, then rescaled to the target
    // spectral radius (the radius is degree-1 homogeneous in the magnitudes).
    Vec weight(edges.size());
    for (size_t k = 0; k < edges.size(); ++k)
        weight[k] = spec.model == GraphModel::Erdos ? 0.5 + rng.uniform() : 1.0;
    Vec sign(edges.size(), 1.0);
    if (spec.sign_mode == SignMode::Mixed)
        for (size_t k = 0; k < edges.size(); ++k)
            sign[k] = rng.bernoulli(0.5) ? 1.0 : -1.0;

    if (!edges.empty()) {
        Matrix absr(n, n);
        for (size_t k = 0; k < edges.size(); ++k) {
            auto [i, j] = edges[k];
            absr(i, j) = weight[k];
            absr(j, i) = weight[k];
        }
        double rho0 = spectral_radius(absr);
        double scale = spec.target_rho / rho0;
        for (double& w : weight) w *= scale;
    }

    RawProblem raw;
    raw.n = n;
    raw.h.resize(n);
    for (int i = 0; i < n; ++i) raw.h[i] = rng.uniform(-2.0, 2.0);
    for (size_t k = 0; k < edges.size(); ++k)
        raw.entries.push_back({edges[k].first, edges[k].second, -sign[k] * weight[k]});
    return raw;
}

}  // namespace minsum
