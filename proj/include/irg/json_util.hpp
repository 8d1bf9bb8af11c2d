#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace irg {

// Bit-stable serialization: keys sorted (nlohmann::json default ordering),
// reals printed with 17 significant digits, LF line endings, trailing
// newline. Identical values always produce identical bytes.
std::string dump_json_stable(const nlohmann::json& j, int indent = 2);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace irg
