#include "minsum/kernels.hpp"

// AVX2 backend. Compiled with -mavx2 when the toolchain targets x86-64;
// otherwise this TU degrades to the nullptr stub at the bottom. Lane math
// mirrors the scalar backend operation-for-operation so results are
// bit-identical, which the equivalence tests assert with memcmp.

#ifdef __AVX2__

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <limits>

namespace minsum::kernels {

namespace {

// gamma[e^1] for a block of four edges starting at an even index is a swap
// within each 128-bit half: [g1 g0 g3 g2].
inline __m256d reverse_pairs(__m256d v) { return _mm256_permute_pd(v, 0x5); }

inline int lowest_lane(__m256d mask) {
    return std::countr_zero(static_cast<unsigned>(_mm256_movemask_pd(mask)));
}

int avx2_gamma_update(const int* src, const double* w2, const double* gamma,
                      const double* gsum, double* out, int m) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    int e = 0;
    for (; e + 4 <= m; e += 4) {
        __m256d g = _mm256_loadu_pd(gamma + e);
        __m256d w = _mm256_loadu_pd(w2 + e);
        __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + e));
        __m256d s = _mm256_i32gather_pd(gsum, idx, 8);
        __m256d excl = _mm256_sub_pd(s, _mm256_mul_pd(w, reverse_pairs(g)));
        __m256d den = _mm256_sub_pd(one, excl);
        __m256d bad = _mm256_cmp_pd(den, zero, _CMP_NGT_UQ);  // den <= 0 or NaN
        if (_mm256_movemask_pd(bad)) return e + lowest_lane(bad);
        _mm256_storeu_pd(out + e, _mm256_div_pd(one, den));
    }
    for (; e < m; ++e) {
        double excl = gsum[src[e]] - w2[e] * gamma[e ^ 1];
        double den = 1.0 - excl;
        if (!(den > 0.0)) return e;
        out[e] = 1.0 / den;
    }
    return -1;
}

int avx2_z_update(const int* src, const double* coupling, const double* w2,
                  const double* gamma, const double* z, const double* gsum,
                  const double* zsum, const double* h, double* out, int m) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    int e = 0;
    for (; e + 4 <= m; e += 4) {
        __m256d g = _mm256_loadu_pd(gamma + e);
        __m256d w = _mm256_loadu_pd(w2 + e);
        __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + e));
        __m256d s = _mm256_i32gather_pd(gsum, idx, 8);
        __m256d excl = _mm256_sub_pd(s, _mm256_mul_pd(w, reverse_pairs(g)));
        __m256d den = _mm256_sub_pd(one, excl);
        __m256d bad = _mm256_cmp_pd(den, zero, _CMP_NGT_UQ);
        if (_mm256_movemask_pd(bad)) return e + lowest_lane(bad);

        __m256d zs = _mm256_i32gather_pd(zsum, idx, 8);
        __m256d hv = _mm256_i32gather_pd(h, idx, 8);
        __m256d zrev = reverse_pairs(_mm256_loadu_pd(z + e));
        __m256d num = _mm256_sub_pd(hv, _mm256_sub_pd(zs, zrev));
        __m256d c = _mm256_loadu_pd(coupling + e);
        _mm256_storeu_pd(out + e, _mm256_div_pd(_mm256_mul_pd(c, num), den));
    }
    for (; e < m; ++e) {
        int i = src[e];
        double excl = gsum[i] - w2[e] * gamma[e ^ 1];
        double den = 1.0 - excl;
        if (!(den > 0.0)) return e;
        double num = h[i] - (zsum[i] - z[e ^ 1]);
        out[e] = coupling[e] * num / den;
    }
    return -1;
}

void avx2_estimate(const double* h, const double* gsum, const double* zsum,
                   double* x, unsigned char* defined, int n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
    int v = 0;
    for (; v + 4 <= n; v += 4) {
        __m256d den = _mm256_sub_pd(one, _mm256_loadu_pd(gsum + v));
        __m256d ok = _mm256_cmp_pd(den, zero, _CMP_GT_OQ);
        __m256d q = _mm256_div_pd(
            _mm256_sub_pd(_mm256_loadu_pd(h + v), _mm256_loadu_pd(zsum + v)), den);
        _mm256_storeu_pd(x + v, _mm256_blendv_pd(nan, q, ok));
        int bits = _mm256_movemask_pd(ok);
        for (int l = 0; l < 4; ++l) defined[v + l] = (bits >> l) & 1;
    }
    for (; v < n; ++v) {
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

double avx2_max_abs_diff(const double* a, const double* b, int n) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_max_pd(acc, _mm256_and_pd(d, abs_mask));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

const Kernels* avx2_kernels() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Kernels k = {
        "avx2", avx2_gamma_update, avx2_z_update, avx2_estimate, avx2_max_abs_diff,
    };
    return &k;
}

}  // namespace minsum::kernels

#else  // !__AVX2__

namespace minsum::kernels {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace minsum::kernels

#endif
