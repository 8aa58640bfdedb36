#include <cstdlib>
#include <stdexcept>
#include <string>

#include "casimir/simd.hpp"

namespace casimir::simd {

std::string to_string(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

bool avx2_available() {
#if defined(CASIMIR_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

const KernelTable& kernels(Backend b) {
    if (b == Backend::Scalar) return detail::scalar_table();
#if defined(CASIMIR_HAVE_AVX2_TU)
    if (avx2_available()) return detail::avx2_table();
#endif
    throw std::runtime_error("avx2 kernels not available on this CPU/build");
}

Backend default_backend() {
    if (const char* env = std::getenv("CASIMIR_SIM_KERNELS")) {
        const std::string v = env;
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2") {
            if (!avx2_available()) {
                throw std::runtime_error("CASIMIR_SIM_KERNELS=avx2 but avx2 is unavailable");
            }
            return Backend::Avx2;
        }
        if (!v.empty() && v != "auto") {
            throw std::runtime_error("CASIMIR_SIM_KERNELS must be scalar, avx2 or auto");
        }
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace casimir::simd
