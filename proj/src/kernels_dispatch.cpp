#include "ape/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ape::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
const Ops& resolve() {
    if (const char* env = std::getenv("APE_KERNEL_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_ops();
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return avx2_ops();
    }
    return avx2_supported() ? avx2_ops() : scalar_ops();
}
} // namespace

const Ops& active() {
    static const Ops& ops = resolve();
    return ops;
}

} // namespace ape::kernels
