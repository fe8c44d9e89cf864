#include "morselab/regularizers.hpp"

#include <optional>

namespace morselab {

const char* regularizer_name(RegularizerSpec::Kind kind) {
    switch (kind) {
        case RegularizerSpec::Kind::none: return "none";
        case RegularizerSpec::Kind::generalized_l2: return "generalized_l2";
        case RegularizerSpec::Kind::standard_l2: return "standard_l2";
        case RegularizerSpec::Kind::multiplicative: return "multiplicative";
    }
    return "unknown";
}

struct Objective::Impl {
    std::size_t dim = 0;
    JetFunction data_fn;
    std::optional<FeedforwardSpec> spec;
    std::optional<ParamLayout> layout;
    std::optional<DataSet> data;
    LossKind loss_kind = LossKind::l2;
};

Objective::Objective(std::shared_ptr<const Impl> impl, RegularizerSpec reg) : impl_(std::move(impl)), reg_(std::move(reg)) {
    check_regularizer();
}

Objective Objective::network(FeedforwardSpec spec, DataSet data, LossKind loss_kind, RegularizerSpec reg) {
    data.validate(spec);
    auto impl = std::make_shared<Impl>();
    impl->layout.emplace(spec);
    impl->dim = impl->layout->dim();
    impl->spec = std::move(spec);
    impl->data = std::move(data);
    impl->loss_kind = loss_kind;
    const Impl* raw = impl.get();
    impl->data_fn = [raw](std::span<const ScalarJet2> alpha) {
        return loss<ScalarJet2>(*raw->spec, *raw->layout, *raw->data, raw->loss_kind, alpha);
    };
    return Objective(std::move(impl), std::move(reg));
}

Objective Objective::function(std::size_t dim, JetFunction f, RegularizerSpec reg) {
    if (dim == 0) throw InvalidInput("objective dimension must be >= 1");
    if (!f) throw InvalidInput("objective function is empty");
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->data_fn = std::move(f);
    return Objective(std::move(impl), std::move(reg));
}

std::size_t Objective::dim() const { return impl_->dim; }

void Objective::check_regularizer() const {
    switch (reg_.kind) {
        case RegularizerSpec::Kind::generalized_l2:
            if (reg_.eps_vec.size() != dim()) {
                throw DimensionMismatch("generalized_l2: eps vector length must equal the parameter dimension");
            }
            break;
        case RegularizerSpec::Kind::multiplicative:
            if (!is_network()) throw InvalidInput("multiplicative regularizer needs a network objective");
            break;
        default: break;
    }
}

template <class T>
T Objective::regularizer_value(std::span<const T> alpha) const {
    switch (reg_.kind) {
        case RegularizerSpec::Kind::none: return T(0.0);
        case RegularizerSpec::Kind::generalized_l2: return generalized_l2<T>(alpha, reg_.eps_vec);
        case RegularizerSpec::Kind::standard_l2: return standard_l2<T>(alpha, reg_.eps);
        case RegularizerSpec::Kind::multiplicative: return multiplicative<T>(*impl_->layout, alpha, reg_.eps);
    }
    return T(0.0);
}

ObjectiveParts Objective::evaluate_parts(std::span<const double> alpha) const {
    if (alpha.size() != dim()) throw DimensionMismatch("objective evaluated at a point of the wrong dimension");
    const std::vector<ScalarJet2> jets = seed(alpha);
    const std::span<const ScalarJet2> view(jets);
    ObjectiveParts parts{impl_->data_fn(view), regularizer_value<ScalarJet2>(view)};
    // A constant data part or an absent regularizer comes back as a dimension-0 jet.
    if (parts.data.dim() == 0) parts.data = ScalarJet2::constant(parts.data.value(), dim());
    if (parts.reg.dim() == 0) parts.reg = ScalarJet2::constant(parts.reg.value(), dim());
    return parts;
}

ScalarJet2 Objective::evaluate(std::span<const double> alpha) const { return evaluate_parts(alpha).total(); }

ObjectiveParts Objective::evaluate_parts(const Eigen::VectorXd& alpha) const {
    return evaluate_parts(std::span<const double>(alpha.data(), static_cast<std::size_t>(alpha.size())));
}

ScalarJet2 Objective::evaluate(const Eigen::VectorXd& alpha) const { return evaluate_parts(alpha).total(); }

double Objective::value(std::span<const double> alpha) const {
    if (alpha.size() != dim()) throw DimensionMismatch("objective evaluated at a point of the wrong dimension");
    double data_part = 0.0;
    if (impl_->spec) {
        data_part = loss<double>(*impl_->spec, *impl_->layout, *impl_->data, impl_->loss_kind, alpha);
    } else {
        data_part = impl_->data_fn(constants(alpha)).value();
    }
    return data_part + regularizer_value<double>(alpha);
}

double Objective::value(const Eigen::VectorXd& alpha) const {
    return value(std::span<const double>(alpha.data(), static_cast<std::size_t>(alpha.size())));
}

Objective Objective::with_regularizer(RegularizerSpec reg) const { return Objective(impl_, std::move(reg)); }

bool Objective::is_network() const { return impl_->spec.has_value(); }

const FeedforwardSpec& Objective::network_spec() const {
    if (!impl_->spec) throw InvalidInput("objective is not a network objective");
    return *impl_->spec;
}

const ParamLayout& Objective::layout() const {
    if (!impl_->layout) throw InvalidInput("objective is not a network objective");
    return *impl_->layout;
}

const DataSet& Objective::dataset() const {
    if (!impl_->data) throw InvalidInput("objective is not a network objective");
    return *impl_->data;
}

Objective regularized_objective(const Objective& data_part, RegularizerSpec reg) {
    return data_part.with_regularizer(std::move(reg));
}

}  // namespace morselab
