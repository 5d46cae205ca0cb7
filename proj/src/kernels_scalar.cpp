#include <cmath>
#include <limits>

#include "minsum/kernels.hpp"

// Reference backend. The rounding sequence here is the contract every SIMD
// backend must reproduce bit-for-bit: one multiply, two subtractions, one
// divide per edge, in that order.

namespace minsum::kernels {

namespace {

int scalar_gamma_update(const int* src, const double* w2, const double* gamma,
                        const double* gsum, double* out, int m) {
    for (int e = 0; e < m; ++e) {
        double excl = gsum[src[e]] - w2[e] * gamma[e ^ 1];
        double den = 1.0 - excl;
        if (!(den > 0.0)) return e;
        out[e] = 1.0 / den;
    }
    return -1;
}

int scalar_z_update(const int* src, const double* coupling, const double* w2,
                    const double* gamma, const double* z, const double* gsum,
                    const double* zsum, const double* h, double* out, int m) {
    for (int e = 0; e < m; ++e) {
        int i = src[e];
        double excl = gsum[i] - w2[e] * gamma[e ^ 1];
        double den = 1.0 - excl;
        if (!(den > 0.0)) return e;
        double num = h[i] - (zsum[i] - z[e ^ 1]);
        out[e] = coupling[e] * num / den;
    }
    return -1;
}

void scalar_estimate(const double* h, const double* gsum, const double* zsum,
                     double* x, unsigned char* defined, int n) {
    for (int v = 0; v < n; ++v) {
        double den = 1.0 - gsum[v];
        if (den > 0.0) {
            x[v] = (h[v] - zsum[v]) / den;
            defined[v] = 1;
        } else {
            x[v] = std::numeric_limits<double>::quiet_NaN();
            defined[v] = 0;
        }
    }
}

double scalar_max_abs_diff(const double* a, const double* b, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar", scalar_gamma_update, scalar_z_update, scalar_estimate,
        scalar_max_abs_diff,
    };
    return k;
}

void accumulate_head_w2(const int* head, const double* w2, const double* gamma,
                        int m, double* gsum, int n) {
    for (int v = 0; v < n; ++v) gsum[v] = 0.0;
    for (int e = 0; e < m; ++e) gsum[head[e]] += w2[e] * gamma[e];
}

void accumulate_head(const int* head, const double* z, int m, double* zsum, int n) {
    for (int v = 0; v < n; ++v) zsum[v] = 0.0;
    for (int e = 0; e < m; ++e) zsum[head[e]] += z[e];
}

}  // namespace minsum::kernels
