#include "morselab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace morselab {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_value(const json& v, int indent, int level, std::string& out) {
    const auto newline = [&](int lvl) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * lvl), ' ');
    };
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            // nlohmann::json objects iterate in sorted key order.
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(level + 1);
                out += json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write_value(it.value(), indent, level + 1, out);
            }
            newline(level);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const json& e : v) {
                if (!first) out += ',';
                first = false;
                newline(level + 1);
                write_value(e, indent, level + 1, out);
            }
            newline(level);
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            const double x = v.get<double>();
            if (std::isfinite(x)) {
                out += format_double(x);
            } else {
                out += '"' + format_double(x) + '"';
            }
            return;
        }
        default: out += v.dump(); return;
    }
}

}  // namespace

std::string dump_json(const json& value, int indent) {
    std::string out;
    write_value(value, indent, 0, out);
    out += '\n';
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move report into place at " + path.string());
    }
}

}  // namespace morselab
