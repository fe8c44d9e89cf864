#include "morselab/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace morselab::simd {
namespace {

Backend detect() {
    if (const char* env = std::getenv("MORSELAB_SIMD"); env != nullptr && std::string(env) == "scalar") {
        return Backend::scalar;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& selected() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

bool avx2_available() {
#if defined(MORSELAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool available = __builtin_cpu_supports("avx2") != 0;
    return available;
#else
    return false;
#endif
}

Backend active_backend() { return selected().load(std::memory_order_relaxed); }

const JetKernels& active_kernels() {
    return active_backend() == Backend::avx2 ? avx2_kernels() : scalar_kernels();
}

void force_backend(Backend backend) { selected().store(backend, std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace morselab::simd
