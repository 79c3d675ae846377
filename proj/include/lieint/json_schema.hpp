#pragma once

// A small JSON Schema validator covering the keywords the bundled config schema
// uses: type, properties, required, additionalProperties, items, minItems,
// maxItems, minLength, enum, const, minimum, maximum, exclusiveMinimum,
// exclusiveMaximum, anyOf, oneOf, and "$ref" to "#/$defs/<name>".

#include <json.hpp>

#include <string>
#include <vector>

namespace lieint {

/// One "<json-pointer>: <message>" entry per violation; empty when valid.
std::vector<std::string> schema_violations(const nlohmann::json& schema, const nlohmann::json& instance);

/// The run-config schema shipped as schema/config.json.
const nlohmann::json& config_schema();

}  // namespace lieint
