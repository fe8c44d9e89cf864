#pragma once

/**
 * @file critfind.hpp
 * @brief Critical point search, classification and Morse verdicts.
 *
 * Critical points are located by multi-start Levenberg-Marquardt iteration on
 * the gradient system grad L = 0 (not by minimization), so saddles and maxima
 * are found as readily as minima. Each survivor is classified from the full
 * eigendecomposition of its Hessian. A degenerate point can be followed along
 * its near-kernel direction to tell an isolated degenerate point from a curve
 * of critical points.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "morselab/regularizers.hpp"

namespace morselab {

struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static Box cube(std::size_t dim, double half_width);
    static Box from_bounds(Eigen::VectorXd lo, Eigen::VectorXd hi);

    std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
    Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
    double mean_half_width() const { return 0.5 * (hi - lo).mean(); }
    bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
};

struct SolverOptions {
    std::size_t max_iters = 200;
    std::size_t polish_iters = 50;
    // Absolute gradient tolerance. Non-positive: tau_grad_rel * (1 + |grad L at box center|).
    double tau_grad = 0.0;
    double tau_grad_rel = 1e-9;
    // Relative eigenvalue threshold: |lambda| <= tau_deg * max(1, max |lambda|) is a zero eigenvalue.
    double tau_deg = 1e-6;
    double dedupe_radius = 1e-6;
    double lambda0 = 1e-3;
    std::uint64_t seed = 0;
    // Extra start points tried before the low-discrepancy sequence.
    std::vector<Eigen::VectorXd> extra_starts;
};

struct Tolerances {
    double tau_grad = 0.0;
    double tau_deg = 0.0;
    double dedupe_radius = 0.0;
};

Tolerances resolve_tolerances(const Objective& obj, const Box& box, const SolverOptions& opts);

struct CriticalPoint {
    Eigen::VectorXd location;
    double value = 0.0;
    double grad_norm = 0.0;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;  // columns match eigenvalues
    std::size_t index = 0;         // eigenvalues < -threshold
    std::size_t positive = 0;      // eigenvalues > threshold
    std::size_t kernel = 0;        // |eigenvalue| <= threshold
    double min_abs_eig = 0.0;
    double eig_scale = 1.0;        // max(1, max |lambda|)
    bool degenerate = false;
    bool classified = true;
    std::size_t basin_start = 0;   // which start converged here

    // Eigenvector of the eigenvalue closest to zero.
    Eigen::VectorXd null_direction() const;
};

// Classifies a point from its Hessian. Throws PreconditionError when the
// gradient norm exceeds tol.tau_grad.
CriticalPoint classify(const Objective& obj, const Eigen::VectorXd& point, const Tolerances& tol);

// Low-discrepancy start points: a Halton sequence with a seeded random shift.
std::vector<Eigen::VectorXd> start_points(const Box& box, std::size_t n, std::uint64_t seed);

std::vector<CriticalPoint> find_critical_points(const Objective& obj, const Box& box, std::size_t n_starts,
                                                const SolverOptions& opts = {});

struct NullTrace {
    enum class Verdict { critical_curve, isolated };

    std::vector<Eigen::VectorXd> samples;
    double max_grad_norm_along = 0.0;
    double arc_length = 0.0;
    // Distance from the start to the polyline after it has left the start's
    // neighbourhood; +inf when the trace never comes back.
    double closure_gap = 0.0;
    Verdict verdict = Verdict::isolated;
    std::string warning;
};

const char* verdict_name(NullTrace::Verdict v);

// Predictor along the near-kernel eigenvector, corrector restricted to the
// hyperplane orthogonal to the predictor direction. Throws PreconditionError
// when `point` is not degenerate.
NullTrace trace_null_direction(const Objective& obj, const CriticalPoint& point, double step, std::size_t n_steps,
                               const Tolerances& tol);

struct MorseReport {
    enum class Verdict { morse_evidence, degenerate_found, positive_dimensional_found };

    std::vector<CriticalPoint> points;
    std::vector<NullTrace> traces;
    Verdict verdict = Verdict::morse_evidence;
    bool vacuous = false;  // no critical points in the box
    Tolerances tolerances;
    std::size_t starts = 0;
    std::uint64_t seed = 0;
    Box box;
};

const char* verdict_name(MorseReport::Verdict v);

// positive_dimensional_found > degenerate_found > morse_evidence.
MorseReport morse_verdict(std::vector<CriticalPoint> points, std::vector<NullTrace> traces);

struct AnalyzeOptions {
    SolverOptions solver;
    std::size_t n_starts = 64;
    std::size_t max_traces = 3;
    double trace_step = 0.0;  // non-positive: 1e-2 * box.mean_half_width()
    std::size_t trace_steps = 20;
};

// find_critical_points + classification + null traces from the first few
// degenerate points + verdict.
MorseReport analyze(const Objective& obj, const Box& box, const AnalyzeOptions& opts);

// Frozen column order:
// x_0..x_{d-1}, value, grad_norm, lambda_0..lambda_{d-1}, min_abs_eig, index, degenerate
std::string critical_points_csv(const std::vector<CriticalPoint>& points, std::size_t dim);

}  // namespace morselab
