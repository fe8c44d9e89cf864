#include "morselab/simd/kernels.hpp"

namespace morselab::simd {
namespace {

void scale_scalar(double a, const double* x, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k];
}

void axpby_scalar(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

void sym_rank1_scalar(double s, const double* g, double* packed, std::size_t d) {
    for (std::size_t i = 0; i < d; ++i) {
        const double gi = g[i];
        double* row = packed + packed_index(i, i, d) - i;  // row[j] is (i, j)
        for (std::size_t j = i; j < d; ++j) row[j] += s * (gi * g[j]);
    }
}

void sym_rank2_scalar(double s, const double* u, const double* v, double* packed, std::size_t d) {
    for (std::size_t i = 0; i < d; ++i) {
        const double ui = u[i];
        const double vi = v[i];
        double* row = packed + packed_index(i, i, d) - i;
        for (std::size_t j = i; j < d; ++j) row[j] += s * (ui * v[j] + vi * u[j]);
    }
}

}  // namespace

const JetKernels& scalar_kernels() {
    static const JetKernels table{scale_scalar, axpby_scalar, sym_rank1_scalar, sym_rank2_scalar};
    return table;
}

}  // namespace morselab::simd
