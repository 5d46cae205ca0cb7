#include <cstdlib>
#include <cstring>

#include "minsum/kernels.hpp"

namespace minsum::kernels {

namespace {

const Kernels& pick() {
    const char* want = std::getenv("MINSUM_KERNELS");
    if (want && std::strcmp(want, "scalar") == 0) return scalar_kernels();
    const Kernels* avx2 = avx2_kernels();
    if (want && std::strcmp(want, "avx2") == 0 && avx2) return *avx2;
    if (avx2) return *avx2;
    return scalar_kernels();
}

}  // namespace

const Kernels& active_kernels() {
    static const Kernels& k = pick();
    return k;
}

}  // namespace minsum::kernels
