#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "morselab/errors.hpp"
#include "morselab/jet.hpp"
#include "morselab/network.hpp"

namespace morselab {

struct RegularizerSpec {
    enum class Kind { none, generalized_l2, standard_l2, multiplicative };

    Kind kind = Kind::none;
    double eps = 0.0;              // standard_l2, multiplicative
    std::vector<double> eps_vec;   // generalized_l2

    static RegularizerSpec none() { return {}; }
    static RegularizerSpec generalized_l2(std::vector<double> e) { return {Kind::generalized_l2, 0.0, std::move(e)}; }
    static RegularizerSpec standard_l2(double e) { return {Kind::standard_l2, e, {}}; }
    static RegularizerSpec multiplicative(double e) { return {Kind::multiplicative, e, {}}; }
};

const char* regularizer_name(RegularizerSpec::Kind kind);

// sum_i eps_i alpha_i^2
template <class T>
T generalized_l2(std::span<const T> alpha, std::span<const double> eps) {
    if (alpha.size() != eps.size()) throw DimensionMismatch("generalized_l2: eps length must equal parameter count");
    T total(0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) total += eps[i] * (alpha[i] * alpha[i]);
    return total;
}

// eps |alpha|^2, accumulated term by term exactly as generalized_l2 with a
// constant vector so the two agree to the last bit.
template <class T>
T standard_l2(std::span<const T> alpha, double eps) {
    T total(0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) total += eps * (alpha[i] * alpha[i]);
    return total;
}

// eps * prod_k |M_k|_F^2 over the weight matrices; biases do not enter.
template <class T>
T multiplicative(const ParamLayout& layout, std::span<const T> alpha, double eps) {
    if (alpha.size() != layout.dim()) throw DimensionMismatch("multiplicative: parameter vector has the wrong length");
    if (layout.num_maps() < 1) throw InvalidInput("multiplicative: network has no weight matrices");
    T product(eps);
    for (std::size_t map = 0; map < layout.num_maps(); ++map) {
        T norm2(0.0);
        for (std::size_t k : layout.weight_coords(map)) norm2 += alpha[k] * alpha[k];
        product = product * norm2;
    }
    return product;
}

struct ObjectiveParts {
    ScalarJet2 data;  // unregularized L
    ScalarJet2 reg;   // R
    ScalarJet2 total() const { return data + reg; }
};

// A twice-differentiable function R^d -> R: either the loss of a feedforward
// network on a dataset, or a plain jet function, plus a regularizer.
// Cheap to copy; the underlying network and data are shared.
class Objective {
public:
    static Objective network(FeedforwardSpec spec, DataSet data, LossKind loss_kind, RegularizerSpec reg);
    static Objective function(std::size_t dim, JetFunction f, RegularizerSpec reg = RegularizerSpec::none());

    std::size_t dim() const;
    const RegularizerSpec& regularizer() const { return reg_; }

    ObjectiveParts evaluate_parts(std::span<const double> alpha) const;
    ScalarJet2 evaluate(std::span<const double> alpha) const;
    ObjectiveParts evaluate_parts(const Eigen::VectorXd& alpha) const;
    ScalarJet2 evaluate(const Eigen::VectorXd& alpha) const;
    // Value only; no derivative propagation.
    double value(std::span<const double> alpha) const;
    double value(const Eigen::VectorXd& alpha) const;

    // Same data part with a different regularizer. Throws InvalidInput when the
    // regularizer does not fit (eps_vec length, multiplicative on a function).
    Objective with_regularizer(RegularizerSpec reg) const;

    bool is_network() const;
    const FeedforwardSpec& network_spec() const;
    const ParamLayout& layout() const;
    const DataSet& dataset() const;

private:
    struct Impl;
    Objective(std::shared_ptr<const Impl> impl, RegularizerSpec reg);
    void check_regularizer() const;

    template <class T>
    T regularizer_value(std::span<const T> alpha) const;

    std::shared_ptr<const Impl> impl_;
    RegularizerSpec reg_;
};

// L_eps = L + R_eps.
Objective regularized_objective(const Objective& data_part, RegularizerSpec reg);

}  // namespace morselab
