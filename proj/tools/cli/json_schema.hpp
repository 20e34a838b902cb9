#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace molcap::cli {

/// Validator for the JSON Schema keywords used by the shipped schemas: type, const, enum,
/// properties, required, additionalProperties, items, minItems, maxItems, minProperties,
/// minLength, minimum, maximum, exclusiveMinimum, exclusiveMaximum, oneOf, anyOf and local
/// "$ref": "#/...". Annotation keywords are ignored; any other keyword is a schema error.
class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema);

  /// Error messages of the form "<json pointer>: <reason>"; empty when the document is valid.
  std::vector<std::string> validate(const nlohmann::json& doc) const;

 private:
  void check(const nlohmann::json& schema, const nlohmann::json& doc, const std::string& where,
             std::vector<std::string>& errors) const;
  const nlohmann::json& resolve(const std::string& ref) const;

  nlohmann::json root_;
};

}  // namespace molcap::cli
