#include "morselab/fixtures.hpp"

namespace morselab::fixtures {

namespace {

DataSet scalar_data(const std::vector<double>& ys) {
    DataSet d;
    const std::vector<double> xs = sample_inputs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d.samples.push_back({Eigen::VectorXd::Constant(1, xs[i]), Eigen::VectorXd::Constant(1, ys[i])});
    }
    return d;
}

}  // namespace

std::vector<double> sample_inputs() { return {-1.0, -0.5, 0.0, 0.5, 1.0}; }

NetworkDocument square_plus_one_131() {
    NetworkDocument doc;
    doc.spec.widths = {1, 3, 1};
    doc.spec.activation = ActivationKind::square_plus_one();
    doc.data = scalar_data({0.8, -0.3, 0.5, 0.1, -0.6});
    return doc;
}

NetworkDocument linear_1221(ActivationKind activation) {
    NetworkDocument doc;
    doc.spec.widths = {1, 2, 2, 1};
    doc.spec.activation = std::move(activation);
    doc.data = scalar_data({-2.0, -1.0, 0.0, 1.0, 2.0});
    return doc;
}

NetworkDocument tanh_deep(std::size_t depth) {
    NetworkDocument doc;
    doc.spec.widths.assign(depth + 2, 2);
    doc.spec.widths.front() = 1;
    doc.spec.widths.back() = 1;
    doc.spec.activation = ActivationKind::tanh();
    doc.data = scalar_data({-0.7, -0.2, 0.3, 0.4, 1.0});
    return doc;
}

NetworkDocument tanh_shallow_no_bias() {
    NetworkDocument doc = tanh_deep(2);
    doc.spec.uses_bias = false;
    return doc;
}

}  // namespace morselab::fixtures
