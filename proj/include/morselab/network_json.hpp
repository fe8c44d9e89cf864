#pragma once

#include <filesystem>

#include <json.hpp>

#include "morselab/network.hpp"

namespace morselab {

struct NetworkDocument {
    FeedforwardSpec spec;
    DataSet data;
};

// Strict parser for the network document (see docs/formats.md). Unknown keys,
// wrong types, and shape mismatches throw InvalidInput.
NetworkDocument parse_network_document(const nlohmann::json& doc);
NetworkDocument load_network_document(const std::filesystem::path& path);
nlohmann::json to_json(const NetworkDocument& doc);

ActivationKind parse_activation(const nlohmann::json& j);
nlohmann::json activation_to_json(const ActivationKind& kind);

}  // namespace morselab
