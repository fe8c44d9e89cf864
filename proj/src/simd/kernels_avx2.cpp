#include "morselab/simd/kernels.hpp"

#include <stdexcept>

#if defined(MORSELAB_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace morselab::simd {

#if defined(MORSELAB_HAVE_AVX2)
namespace {

// Tails use the same operation order as the vector body so the results match
// the scalar backend bit for bit.

void scale_avx2(double a, const double* x, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out + k, _mm256_mul_pd(va, _mm256_loadu_pd(x + k)));
    }
    for (; k < n; ++k) out[k] = a * x[k];
}

void axpby_avx2(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
        const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + k));
        _mm256_storeu_pd(out + k, _mm256_add_pd(ax, by));
    }
    for (; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

void sym_rank1_avx2(double s, const double* g, double* packed, std::size_t d) {
    const __m256d vs = _mm256_set1_pd(s);
    for (std::size_t i = 0; i < d; ++i) {
        const double gi = g[i];
        const __m256d vgi = _mm256_set1_pd(gi);
        double* row = packed + packed_index(i, i, d) - i;
        std::size_t j = i;
        for (; j + 4 <= d; j += 4) {
            const __m256d prod = _mm256_mul_pd(vgi, _mm256_loadu_pd(g + j));
            const __m256d upd = _mm256_mul_pd(vs, prod);
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), upd));
        }
        for (; j < d; ++j) row[j] += s * (gi * g[j]);
    }
}

void sym_rank2_avx2(double s, const double* u, const double* v, double* packed, std::size_t d) {
    const __m256d vs = _mm256_set1_pd(s);
    for (std::size_t i = 0; i < d; ++i) {
        const double ui = u[i];
        const double vi = v[i];
        const __m256d vui = _mm256_set1_pd(ui);
        const __m256d vvi = _mm256_set1_pd(vi);
        double* row = packed + packed_index(i, i, d) - i;
        std::size_t j = i;
        for (; j + 4 <= d; j += 4) {
            const __m256d t1 = _mm256_mul_pd(vui, _mm256_loadu_pd(v + j));
            const __m256d t2 = _mm256_mul_pd(vvi, _mm256_loadu_pd(u + j));
            const __m256d upd = _mm256_mul_pd(vs, _mm256_add_pd(t1, t2));
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), upd));
        }
        for (; j < d; ++j) row[j] += s * (ui * v[j] + vi * u[j]);
    }
}

}  // namespace

const JetKernels& avx2_kernels() {
    if (!avx2_available()) throw std::runtime_error("AVX2 kernels requested on a CPU without AVX2");
    static const JetKernels table{scale_avx2, axpby_avx2, sym_rank1_avx2, sym_rank2_avx2};
    return table;
}

#else

const JetKernels& avx2_kernels() {
    throw std::runtime_error("morselab was built without AVX2 kernels");
}

#endif

}  // namespace morselab::simd
