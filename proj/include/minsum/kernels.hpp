#pragma once

namespace minsum::kernels {

/// Data-parallel inner loops of the solver, in scalar and SIMD variants.
///
/// All backends are required to produce bit-identical outputs: the vector
/// code mirrors the scalar rounding sequence exactly (no FMA, no reassociated
/// sums), which is what makes traces reproducible across machines.
///
/// Conventions shared by every entry point:
///   - m directed edges stored in pairs, reverse(e) == e^1, so m is even;
///   - w2[e] == w2[e^1] (squared coupling is direction-symmetric);
///   - gsum/zsum are full head-indexed sums; the "all neighbors but one"
///     sums of the update rules are formed by subtracting the reverse-edge
///     term, which is exact for leaves (same product cancels bitwise).
struct Kernels {
    const char* name;

    /// out[e] = 1 / (1 - (gsum[src[e]] - w2[e]*gamma[e^1])).
    /// Returns the lowest edge index with denominator <= 0 (out contents are
    /// then unspecified), or -1 when every update is well-posed.
    int (*gamma_update)(const int* src, const double* w2, const double* gamma,
                        const double* gsum, double* out, int m);

    /// out[e] = coupling[e] * (h[src[e]] - (zsum[src[e]] - z[e^1])) / den,
    /// with den as in gamma_update. Same ill-posedness contract.
    int (*z_update)(const int* src, const double* coupling, const double* w2,
                    const double* gamma, const double* z, const double* gsum,
                    const double* zsum, const double* h, double* out, int m);

    /// Per-vertex estimate x[v] = (h[v] - zsum[v]) / (1 - gsum[v]);
    /// defined[v] = 1 iff the denominator is positive, else x[v] = NaN.
    void (*estimate)(const double* h, const double* gsum, const double* zsum,
                     double* x, unsigned char* defined, int n);

    double (*max_abs_diff)(const double* a, const double* b, int n);
};

const Kernels& scalar_kernels();

/// AVX2 backend, or nullptr when the build or the CPU lacks support.
const Kernels* avx2_kernels();

/// Best available backend; MINSUM_KERNELS={scalar,avx2} overrides.
const Kernels& active_kernels();

/// gsum[v] = sum over directed edges e with head[e]==v of w2[e]*gamma[e].
/// Scalar in every backend (scatter order defines the rounding).
void accumulate_head_w2(const int* head, const double* w2, const double* gamma,
                        int m, double* gsum, int n);

/// zsum[v] = sum over directed edges e with head[e]==v of z[e].
void accumulate_head(const int* head, const double* z, int m, double* zsum, int n);

}  // namespace minsum::kernels
