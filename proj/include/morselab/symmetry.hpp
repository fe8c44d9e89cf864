#pragma once

// Per-hidden-layer linear symmetry of a feedforward network: for an invertible
// S acting on hidden layer i,
//
//   M_i -> S M_i,   b_i -> S b_i,   M_{i+1} -> M_{i+1} S^{-1}.
//
// With identity activation the S and S^{-1} cancel, so f_alpha (and any loss
// built from it) is unchanged. With a nonlinear activation they generally do
// not. Hidden layers are numbered 1..l.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "morselab/critfind.hpp"
#include "morselab/network.hpp"
#include "morselab/regularizers.hpp"

namespace morselab {

struct LayerAction {
    std::size_t layer = 1;
    Eigen::MatrixXd S;
    Eigen::MatrixXd S_inv;

    // Computes S^{-1}; throws InvalidInput when S is singular or not square.
    static LayerAction make(std::size_t layer, Eigen::MatrixXd S);
    bool is_rotation(double tol = 1e-12) const;
};

struct SkewGenerator {
    std::size_t layer = 1;
    Eigen::MatrixXd A;  // A^T = -A

    // Throws InvalidInput when A is not skew-symmetric.
    static SkewGenerator make(std::size_t layer, Eigen::MatrixXd A);
    // exp(tA), a rotation.
    Eigen::MatrixXd rotation(double t) const;
};

// Padé scaling-and-squaring.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

// Haar-distributed element of SO(k).
Eigen::MatrixXd random_rotation(std::size_t k, std::mt19937_64& rng);

// S~ alpha. Throws InvalidInput when the layer index is out of range, S has
// the wrong size, or either adjacent map is masked.
Eigen::VectorXd apply_layer_symmetry(const FeedforwardSpec& spec, std::span<const double> alpha,
                                     const LayerAction& action);

// |L(alpha) - L(S~ alpha)| for a network objective (regularizer included).
double check_invariance(const Objective& obj, const Eigen::VectorXd& alpha, const LayerAction& action);

struct OrbitReport {
    std::vector<double> t;
    std::vector<double> grad_norms;
    double max_grad_norm_on_orbit = 0.0;
    double orbit_arc_length = 0.0;  // polyline length through the sampled orbit points
};

// Gradient norm along t -> exp(tA) . alpha_star. Throws PreconditionError
// when |grad obj(alpha_star)| > tau_grad.
OrbitReport orbit_criticality(const Objective& obj, const Eigen::VectorXd& alpha_star, const SkewGenerator& gen,
                              std::span<const double> t_samples, double tau_grad);

}  // namespace morselab
