#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace minsum {

using Vec = std::vector<double>;

/// Dense row-major matrix, just big enough for the desk-scale operator work
/// (|R| is n x n, the directed-edge operator is 2|E| x 2|E|).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

/// Shortest-but-exact decimal form: 17 significant digits round-trip a double.
std::string fmt_g17(double v);

double max_abs(const Vec& v);

}  // namespace minsum
