#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "morselab/jet.hpp"
#include "morselab/simd/kernels.hpp"

using namespace morselab;
using namespace morselab::simd;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// A jet computation that exercises every kernel.
ScalarJet2 workload(std::span<const double> p) {
    const std::vector<ScalarJet2> x = seed(p);
    ScalarJet2 acc(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const ScalarJet2 t = tanh(x[i] * x[(i + 1) % x.size()] - 0.3);
        acc += t * t + 0.5 * sin(x[i]) / (1.0 + square(x[i]));
    }
    return exp(0.1 * acc) - acc;
}

std::vector<double> flatten(const ScalarJet2& j) {
    std::vector<double> out{j.value()};
    out.insert(out.end(), j.grad().begin(), j.grad().end());
    out.insert(out.end(), j.hess_packed().begin(), j.hess_packed().end());
    return out;
}

}  // namespace

TEST_CASE("packed index layout") {
    CHECK(packed_size(0) == 0);
    CHECK(packed_size(4) == 10);
    std::size_t expect = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i; j < 5; ++j) CHECK(packed_index(i, j, 5) == expect++);
    }
}

TEST_CASE("backend selection") {
    const Backend b = active_backend();
    CHECK((b == Backend::scalar || b == Backend::avx2));
    CHECK(backend_name(Backend::scalar) == "scalar");
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    if (!avx2_available()) {
        MESSAGE("AVX2 unavailable; equivalence not exercised");
        return;
    }
    const JetKernels& s = scalar_kernels();
    const JetKernels& v = avx2_kernels();
    std::mt19937_64 rng(7);
    for (std::size_t d = 0; d <= 19; ++d) {
        const std::size_t n = d + packed_size(d);
        const auto x = random_vec(rng, n), y = random_vec(rng, n);
        std::vector<double> o1(n), o2(n);
        s.scale(1.7, x.data(), o1.data(), n);
        v.scale(1.7, x.data(), o2.data(), n);
        CHECK(bit_equal(o1, o2));
        s.axpby(0.3, x.data(), -2.1, y.data(), o1.data(), n);
        v.axpby(0.3, x.data(), -2.1, y.data(), o2.data(), n);
        CHECK(bit_equal(o1, o2));

        const auto g = random_vec(rng, d), u = random_vec(rng, d);
        auto p1 = random_vec(rng, packed_size(d));
        auto p2 = p1;
        s.sym_rank1(0.7, g.data(), p1.data(), d);
        v.sym_rank1(0.7, g.data(), p2.data(), d);
        CHECK(bit_equal(p1, p2));
        s.sym_rank2(-1.3, g.data(), u.data(), p1.data(), d);
        v.sym_rank2(-1.3, g.data(), u.data(), p2.data(), d);
        CHECK(bit_equal(p1, p2));
    }
}

TEST_CASE("whole jet computations agree bit for bit across backends") {
    if (!avx2_available()) return;
    const Backend before = active_backend();
    std::mt19937_64 rng(11);
    for (std::size_t d : {1, 2, 3, 5, 8, 13, 21}) {
        const auto p = random_vec(rng, d);
        force_backend(Backend::scalar);
        const auto a = flatten(workload(p));
        force_backend(Backend::avx2);
        const auto b = flatten(workload(p));
        CHECK(bit_equal(a, b));
    }
    force_backend(before);
}
