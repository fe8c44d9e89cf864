#include "morselab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "morselab/errors.hpp"

namespace morselab {

LayerAction LayerAction::make(std::size_t layer, Eigen::MatrixXd S) {
    if (S.rows() != S.cols() || S.rows() == 0) throw InvalidInput("layer action: S must be square and nonempty");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible()) throw InvalidInput("layer action: S is singular");
    LayerAction a;
    a.layer = layer;
    a.S_inv = lu.inverse();
    a.S = std::move(S);
    return a;
}

bool LayerAction::is_rotation(double tol) const {
    const auto k = S.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
    return (S.transpose() * S - I).norm() <= tol && std::abs(S.determinant() - 1.0) <= 1e3 * tol;
}

SkewGenerator SkewGenerator::make(std::size_t layer, Eigen::MatrixXd A) {
    if (A.rows() != A.cols() || A.rows() == 0) throw InvalidInput("skew generator: A must be square and nonempty");
    if ((A + A.transpose()).cwiseAbs().maxCoeff() > 0.0) throw InvalidInput("skew generator: A is not skew-symmetric");
    return {layer, std::move(A)};
}

Eigen::MatrixXd SkewGenerator::rotation(double t) const { return matrix_exponential(t * A); }

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) { return A.exp(); }

Eigen::MatrixXd random_rotation(std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return q;
}

Eigen::VectorXd apply_layer_symmetry(const FeedforwardSpec& spec, std::span<const double> alpha,
                                     const LayerAction& action) {
    const std::size_t i = action.layer;
    if (i < 1 || i > spec.depth()) {
        std::ostringstream msg;
        msg << "layer action: hidden layer " << i << " outside [1, " << spec.depth() << "]";
        throw InvalidInput(msg.str());
    }
    if (static_cast<std::size_t>(action.S.rows()) != spec.widths[i]) {
        throw InvalidInput("layer action: S size differs from the hidden layer width");
    }
    if (!spec.masks.empty() && (!spec.masks[i - 1].all() || !spec.masks[i].all())) {
        throw InvalidInput("layer action: maps adjacent to the layer must be fully connected");
    }
    NetworkParams p = unpack(alpha, spec);
    p.weights[i - 1] = action.S * p.weights[i - 1];
    if (!p.biases.empty()) p.biases[i - 1] = action.S * p.biases[i - 1];
    p.weights[i] = p.weights[i] * action.S_inv;
    return pack(p, spec);
}

double check_invariance(const Objective& obj, const Eigen::VectorXd& alpha, const LayerAction& action) {
    const Eigen::VectorXd moved =
        apply_layer_symmetry(obj.network_spec(), {alpha.data(), static_cast<std::size_t>(alpha.size())}, action);
    return std::abs(obj.value(alpha) - obj.value(moved));
}

OrbitReport orbit_criticality(const Objective& obj, const Eigen::VectorXd& alpha_star, const SkewGenerator& gen,
                              std::span<const double> t_samples, double tau_grad) {
    const double g0 = obj.evaluate(alpha_star).gradient().norm();
    if (!(g0 <= tau_grad)) {
        std::ostringstream msg;
        msg << "orbit_criticality: base point is not critical (|grad| = " << g0 << ", tau = " << tau_grad << ")";
        throw PreconditionError(msg.str());
    }
    const std::span<const double> base(alpha_star.data(), static_cast<std::size_t>(alpha_star.size()));
    OrbitReport r;
    Eigen::VectorXd prev;
    for (double t : t_samples) {
        const LayerAction act = LayerAction::make(gen.layer, gen.rotation(t));
        const Eigen::VectorXd a = apply_layer_symmetry(obj.network_spec(), base, act);
        const double g = obj.evaluate(a).gradient().norm();
        r.t.push_back(t);
        r.grad_norms.push_back(g);
        r.max_grad_norm_on_orbit = std::max(r.max_grad_norm_on_orbit, g);
        if (prev.size() > 0) r.orbit_arc_length += (a - prev).norm();
        prev = a;
    }
    return r;
}

}  // namespace morselab
