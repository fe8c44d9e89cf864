#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace morselab {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 17 significant digits ("%.17g"); non-finite values as "nan", "inf", "-inf".
std::string format_double(double x);

// JSON text with sorted object keys and every floating-point number printed
// with 17 significant digits. Non-finite numbers are written as strings.
std::string dump_json(const nlohmann::json& value, int indent = 2);

// Writes via a temporary sibling file and rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace morselab
