// Private helpers shared by the serialization code paths.
#ifndef PRAG_SRC_JSON_UTIL_H_
#define PRAG_SRC_JSON_UTIL_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "prag/schema.h"

namespace prag::detail {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& data);

// Parses `text`, mapping parse failures to kDataLoss naming `what`.
json parse_json(const std::string& text, const std::string& what);

json schema_to_json_value(const AttributeSchema& schema);
AttributeSchema schema_from_json_value(const json& j);

// Deterministic rendering: sorted keys (std::map backed objects), two-space
// indentation, trailing newline.
std::string dump(const json& j);

}  // namespace prag::detail

#endif  // PRAG_SRC_JSON_UTIL_H_
