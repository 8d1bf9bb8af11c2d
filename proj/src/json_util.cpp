#include "irg/json_util.hpp"

#include <cmath>
#include <cstdio>

#include "irg/errors.hpp"

namespace irg {

namespace {

void dump_value(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const auto pad = [&](int d) {
        if (indent >= 0) out.append(static_cast<std::size_t>(indent) * d, ' ');
    };
    const auto newline = [&] {
        if (indent >= 0) out.push_back('\n');
    };

    switch (j.type()) {
    case nlohmann::json::value_t::null:
        out += "null";
        break;
    case nlohmann::json::value_t::boolean:
        out += j.get<bool>() ? "true" : "false";
        break;
    case nlohmann::json::value_t::number_integer:
        out += std::to_string(j.get<std::int64_t>());
        break;
    case nlohmann::json::value_t::number_unsigned:
        out += std::to_string(j.get<std::uint64_t>());
        break;
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw IoError("non-finite real in serialized record");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
        break;
    }
    case nlohmann::json::value_t::string:
        out += nlohmann::json(j.get<std::string>()).dump(); // canonical escaping
        break;
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            break;
        }
        out += '[';
        newline();
        for (std::size_t i = 0; i < j.size(); ++i) {
            pad(depth + 1);
            dump_value(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            newline();
        }
        pad(depth);
        out += ']';
        break;
    }
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += '{';
        newline();
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            pad(depth + 1);
            out += nlohmann::json(it.key()).dump();
            out += indent >= 0 ? ": " : ":";
            dump_value(it.value(), out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            newline();
        }
        pad(depth);
        out += '}';
        break;
    }
    default:
        throw IoError("unsupported JSON value type in serialized record");
    }
}

} // namespace

std::string dump_json_stable(const nlohmann::json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    if (indent >= 0) out.push_back('\n');
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

} // namespace irg
