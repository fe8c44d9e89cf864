#pragma once

/**
 * @file jet.hpp
 * @brief Forward-mode second-order jets.
 *
 * A ScalarJet2 carries the value, gradient and Hessian of a scalar quantity
 * with respect to d seed variables. Arithmetic and elementary functions
 * propagate all three exactly (up to floating-point rounding) by the first-
 * and second-order chain and product rules. The Hessian is stored as a packed
 * upper triangle, so it is symmetric by construction.
 *
 * A jet of dimension 0 is a plain constant and combines with jets of any
 * dimension. Two jets of different nonzero dimension cannot be combined.
 */

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace morselab {

class ScalarJet2 {
public:
    ScalarJet2() = default;
    ScalarJet2(double value) : value_(value) {}  // NOLINT: implicit constant

    static ScalarJet2 constant(double value, std::size_t dim);
    // Seed jet for coordinate `index`: gradient e_index, Hessian zero.
    static ScalarJet2 variable(double value, std::size_t index, std::size_t dim);

    double value() const { return value_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> grad() const { return {buf_.data(), dim_}; }
    std::span<const double> hess_packed() const { return {buf_.data() + dim_, buf_.size() - dim_}; }
    double hess(std::size_t i, std::size_t j) const;

    Eigen::VectorXd gradient() const;
    Eigen::MatrixXd hessian() const;

    ScalarJet2 operator-() const;

    ScalarJet2& operator+=(const ScalarJet2& rhs);
    ScalarJet2& operator-=(const ScalarJet2& rhs);
    ScalarJet2& operator*=(const ScalarJet2& rhs);
    ScalarJet2& operator/=(const ScalarJet2& rhs);
    ScalarJet2& operator+=(double rhs);
    ScalarJet2& operator-=(double rhs);
    ScalarJet2& operator*=(double rhs);
    ScalarJet2& operator/=(double rhs);

    // g = phi(u) given phi(u.value), phi'(u.value), phi''(u.value).
    static ScalarJet2 compose(const ScalarJet2& u, double f0, double f1, double f2);

private:
    friend ScalarJet2 operator*(const ScalarJet2& a, const ScalarJet2& b);

    double value_ = 0.0;
    std::size_t dim_ = 0;
    std::vector<double> buf_;  // gradient (dim_) followed by packed Hessian
};

ScalarJet2 operator+(ScalarJet2 a, const ScalarJet2& b);
ScalarJet2 operator-(ScalarJet2 a, const ScalarJet2& b);
ScalarJet2 operator*(const ScalarJet2& a, const ScalarJet2& b);
ScalarJet2 operator/(const ScalarJet2& a, const ScalarJet2& b);
ScalarJet2 operator+(ScalarJet2 a, double b);
ScalarJet2 operator+(double a, ScalarJet2 b);
ScalarJet2 operator-(ScalarJet2 a, double b);
ScalarJet2 operator-(double a, const ScalarJet2& b);
ScalarJet2 operator*(ScalarJet2 a, double b);
ScalarJet2 operator*(double a, ScalarJet2 b);
ScalarJet2 operator/(ScalarJet2 a, double b);
ScalarJet2 operator/(double a, const ScalarJet2& b);

ScalarJet2 square(const ScalarJet2& u);
ScalarJet2 sqrt(const ScalarJet2& u);
ScalarJet2 exp(const ScalarJet2& u);
ScalarJet2 log(const ScalarJet2& u);
ScalarJet2 sin(const ScalarJet2& u);
ScalarJet2 cos(const ScalarJet2& u);
ScalarJet2 tanh(const ScalarJet2& u);

inline double value_of(double x) { return x; }
inline double value_of(const ScalarJet2& x) { return x.value(); }

// Seeds one jet per coordinate. Throws InvalidInput on an empty point.
std::vector<ScalarJet2> seed(std::span<const double> point);
// Dimension-0 jets: evaluates a JetFunction for its value only.
std::vector<ScalarJet2> constants(std::span<const double> point);

using JetFunction = std::function<ScalarJet2(std::span<const ScalarJet2>)>;

// ---------------------------------------------------------------------------
// Activations

struct ActivationKind {
    enum class Tag { identity, tanh, sigmoid, softplus, square_plus_one, polynomial };

    Tag tag = Tag::identity;
    std::vector<double> coeffs;  // polynomial only: c0 + c1 u + c2 u^2 + ...

    static ActivationKind identity() { return {Tag::identity, {}}; }
    static ActivationKind tanh() { return {Tag::tanh, {}}; }
    static ActivationKind sigmoid() { return {Tag::sigmoid, {}}; }
    static ActivationKind softplus() { return {Tag::softplus, {}}; }
    static ActivationKind square_plus_one() { return {Tag::square_plus_one, {}}; }
    static ActivationKind polynomial(std::vector<double> c) { return {Tag::polynomial, std::move(c)}; }

    bool operator==(const ActivationKind&) const = default;
};

struct ActivationDerivs {
    double value;
    double first;
    double second;
};

ActivationDerivs activation_derivs(const ActivationKind& kind, double u);

double apply_activation(const ActivationKind& kind, double u);
ScalarJet2 apply_activation(const ActivationKind& kind, const ScalarJet2& u);

// Canonical lowercase name ("square_plus_one", ...); polynomial is "polynomial".
const char* activation_name(ActivationKind::Tag tag);

// ---------------------------------------------------------------------------
// Finite-difference oracle

struct FiniteDifferenceReport {
    double max_grad_err = 0.0;
    double max_hess_err = 0.0;
    double grad_norm = 0.0;  // of the jet gradient
    double hess_norm = 0.0;  // Frobenius, of the jet Hessian
};

// Compares the jet gradient/Hessian of f at `point` against central
// differences of f's values with step h (O(h^2) stencils). The stencil
// evaluations use dimension-0 jets, so only value propagation is exercised on
// the difference side.
FiniteDifferenceReport finite_difference_check(const JetFunction& f, std::span<const double> point, double h);

}  // namespace morselab
