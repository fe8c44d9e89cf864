#pragma once

// Two concrete landscapes with known non-Morse critical sets:
//
//  * the radial quartic f_eps(x, y) = -1/4 (x^2 + y^2)^2 + 1/2 eps (x^2 + y^2),
//    whose critical set for eps > 0 is the origin plus the circle r = sqrt(eps);
//  * the core locus of a deep network under the multiplicative regularizer:
//    M_{k1} = M_{k2} = M_{l+1} = 0, b_{k1} = b_{k2} = 0, b_{l+1} = mean target,
//    every other coordinate free.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "morselab/critfind.hpp"
#include "morselab/network.hpp"
#include "morselab/regularizers.hpp"

namespace morselab {

struct RadialQuartic {
    double eps = 0.0;

    // -1/4 r^4 as the data part, standard L2 with eps/2 as the regularizer.
    Objective objective() const;
    // [-B, B]^2 with B = max(1, 2 sqrt|eps|).
    Box default_box() const;
};

struct RadialOptions {
    std::size_t n_starts = 64;
    std::uint64_t seed = 0;
    SolverOptions solver;
    // Samples per full circle for the loop trace; the trace runs 5% past one turn.
    std::size_t trace_samples_per_turn = 400;
};

struct RadialReport {
    double eps = 0.0;
    std::vector<CriticalPoint> points;
    std::size_t circle_points = 0;       // non-origin points
    double circle_radius_found = 0.0;    // mean radius of the non-origin points
    double max_radius_err = 0.0;         // max | |p| - sqrt(eps) |
    double max_zero_eig = 0.0;           // max over circle points of min |lambda|
    double max_curvature_err = 0.0;      // max | lambda_min - (-2 eps) |
    bool all_circle_degenerate = true;
    bool origin_found = false;
    std::optional<CriticalPoint> origin;
    std::optional<NullTrace> trace;      // loop trace from one circle point
    bool loop_closed = false;            // closure gap <= 1e-4
    MorseReport::Verdict verdict = MorseReport::Verdict::morse_evidence;
    Tolerances tolerances;
};

RadialReport radial_verify(double eps, const RadialOptions& opts = {});

// Parameter indices left free by the core-locus constraints for (k1, k2).
std::vector<std::size_t> core_locus_free_coords(const FeedforwardSpec& spec, std::size_t k1, std::size_t k2);

// A point of C_{k1,k2}. With no seed every free coordinate is zero (the
// origin-like point); otherwise free coordinates are uniform on [-1, 1].
// literal_sum sets b_{l+1} to the sum of the targets instead of their mean.
// Throws InvalidInput for a masked network, depth < 2, or indices outside
// 1 <= k1 < k2 <= l.
Eigen::VectorXd core_locus_point(const FeedforwardSpec& spec, const DataSet& data, std::size_t k1, std::size_t k2,
                                 std::optional<std::uint64_t> free_seed = std::nullopt, bool literal_sum = false);

struct CoreLocusReport {
    double grad_norm = 0.0;
    double hess_max_abs = 0.0;
    double min_abs_eig = 0.0;
    double eig_scale = 1.0;
    bool degenerate = false;
    double scale = 1.0;  // 1 + sum_i |y_i|^2, the size of the loss at f = 0
};

// Measures gradient and Hessian at a point; never asserts.
CoreLocusReport verify_core_locus(const Objective& obj, const Eigen::VectorXd& point, double tau_deg = 1e-6);

}  // namespace morselab
