#pragma once

#include <cstddef>
#include <string_view>

namespace morselab::simd {

// Inner loops of second-order jet propagation. Every backend must produce
// bit-identical results: kernels are elementwise (no reductions) and the
// translation units are built with -ffp-contract=off.
//
// Packed symmetric storage is row-major upper triangle: row i holds the
// entries (i, i..d-1) contiguously.
struct JetKernels {
    // out[k] = a * x[k]
    void (*scale)(double a, const double* x, double* out, std::size_t n);
    // out[k] = a * x[k] + b * y[k]
    void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
    // packed(i, j) += s * (g[i] * g[j])
    void (*sym_rank1)(double s, const double* g, double* packed, std::size_t d);
    // packed(i, j) += s * (u[i] * v[j] + v[i] * u[j])
    void (*sym_rank2)(double s, const double* u, const double* v, double* packed, std::size_t d);
};

enum class Backend { scalar, avx2 };

const JetKernels& scalar_kernels();
// Throws std::runtime_error when the binary was built without AVX2 support
// or the running CPU lacks it.
const JetKernels& avx2_kernels();

bool avx2_available();

// Selected once: AVX2 when the CPU supports it, unless MORSELAB_SIMD=scalar.
Backend active_backend();
const JetKernels& active_kernels();

// Test hook; not thread-safe against concurrent jet arithmetic.
void force_backend(Backend backend);

std::string_view backend_name(Backend backend);

constexpr std::size_t packed_size(std::size_t d) { return d * (d + 1) / 2; }

// Offset of (i, j), i <= j, in the packed upper triangle.
constexpr std::size_t packed_index(std::size_t i, std::size_t j, std::size_t d) {
    return i * (2 * d - i + 1) / 2 + (j - i);
}

}  // namespace morselab::simd
