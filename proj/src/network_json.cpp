#include "morselab/network_json.hpp"

#include <fstream>
#include <set>
#include <string>

#include "morselab/errors.hpp"

namespace morselab {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.count(key) == 0) throw InvalidInput(where + ": unknown field '" + key + "'");
    }
}

Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidInput(where + " must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InvalidInput(where + " must contain only numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

}  // namespace

ActivationKind parse_activation(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "identity" || name == "linear") return ActivationKind::identity();
        if (name == "tanh") return ActivationKind::tanh();
        if (name == "sigmoid") return ActivationKind::sigmoid();
        if (name == "softplus") return ActivationKind::softplus();
        if (name == "square_plus_one") return ActivationKind::square_plus_one();
        throw InvalidInput("unknown activation '" + name + "'");
    }
    if (j.is_object()) {
        reject_unknown_keys(j, {"polynomial"}, "activation");
        if (!j.contains("polynomial")) throw InvalidInput("activation object needs 'polynomial'");
        const Eigen::VectorXd c = parse_vector(j.at("polynomial"), "activation.polynomial");
        if (c.size() == 0) throw InvalidInput("activation.polynomial must be nonempty");
        return ActivationKind::polynomial({c.data(), c.data() + c.size()});
    }
    throw InvalidInput("activation must be a string or {\"polynomial\": [...]}");
}

json activation_to_json(const ActivationKind& kind) {
    if (kind.tag == ActivationKind::Tag::polynomial) return json{{"polynomial", kind.coeffs}};
    return activation_name(kind.tag);
}

NetworkDocument parse_network_document(const json& doc) {
    if (!doc.is_object()) throw InvalidInput("network document must be a JSON object");
    reject_unknown_keys(doc, {"widths", "activation", "mask", "uses_bias", "data"}, "network document");
    for (const char* key : {"widths", "activation", "data"}) {
        if (!doc.contains(key)) throw InvalidInput(std::string("network document: missing '") + key + "'");
    }

    NetworkDocument out;
    const json& widths = doc.at("widths");
    if (!widths.is_array()) throw InvalidInput("widths must be an array");
    for (const json& w : widths) {
        if (!w.is_number_integer() || w.get<long long>() < 1) throw InvalidInput("widths must be integers >= 1");
        out.spec.widths.push_back(w.get<std::size_t>());
    }
    out.spec.activation = parse_activation(doc.at("activation"));
    if (doc.contains("uses_bias")) {
        if (!doc.at("uses_bias").is_boolean()) throw InvalidInput("uses_bias must be a boolean");
        out.spec.uses_bias = doc.at("uses_bias").get<bool>();
    }
    if (doc.contains("mask")) {
        const json& masks = doc.at("mask");
        if (!masks.is_array()) throw InvalidInput("mask must be an array of matrices");
        for (const json& m : masks) {
            if (!m.is_array() || m.empty()) throw InvalidInput("each mask must be a nonempty array of rows");
            const std::size_t rows = m.size();
            const std::size_t cols = m[0].is_array() ? m[0].size() : 0;
            Mask mask(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < rows; ++r) {
                if (!m[r].is_array() || m[r].size() != cols) throw InvalidInput("mask rows must have equal length");
                for (std::size_t c = 0; c < cols; ++c) {
                    const json& e = m[r][c];
                    bool on = false;
                    if (e.is_boolean()) {
                        on = e.get<bool>();
                    } else if (e.is_number_integer() && (e.get<int>() == 0 || e.get<int>() == 1)) {
                        on = e.get<int>() == 1;
                    } else {
                        throw InvalidInput("mask entries must be booleans or 0/1");
                    }
                    mask(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = on;
                }
            }
            out.spec.masks.push_back(std::move(mask));
        }
    }
    out.spec.validate();

    const json& data = doc.at("data");
    if (!data.is_array()) throw InvalidInput("data must be an array of {x, y} objects");
    for (const json& pair : data) {
        if (!pair.is_object()) throw InvalidInput("data entries must be objects");
        reject_unknown_keys(pair, {"x", "y"}, "data entry");
        if (!pair.contains("x") || !pair.contains("y")) throw InvalidInput("data entries need 'x' and 'y'");
        out.data.samples.push_back({parse_vector(pair.at("x"), "data.x"), parse_vector(pair.at("y"), "data.y")});
    }
    out.data.validate(out.spec);
    return out;
}

NetworkDocument load_network_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open network document " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_network_document(doc);
}

json to_json(const NetworkDocument& doc) {
    json out;
    out["widths"] = doc.spec.widths;
    out["activation"] = activation_to_json(doc.spec.activation);
    if (!doc.spec.uses_bias) out["uses_bias"] = false;
    if (!doc.spec.masks.empty()) {
        json masks = json::array();
        for (const Mask& m : doc.spec.masks) {
            json rows = json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) ? 1 : 0);
                rows.push_back(std::move(row));
            }
            masks.push_back(std::move(rows));
        }
        out["mask"] = std::move(masks);
    }
    json data = json::array();
    for (const Sample& s : doc.data.samples) {
        data.push_back({{"x", std::vector<double>(s.x.data(), s.x.data() + s.x.size())},
                        {"y", std::vector<double>(s.y.data(), s.y.data() + s.y.size())}});
    }
    out["data"] = std::move(data);
    return out;
}

}  // namespace morselab
