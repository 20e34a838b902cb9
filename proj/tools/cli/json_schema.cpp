#include "json_schema.hpp"

#include <set>
#include <stdexcept>

namespace molcap::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kAnnotations = {"$schema", "$id", "$defs", "title", "description",
                                            "default"};

bool has_type(const json& doc, const std::string& type) {
  if (type == "null") return doc.is_null();
  if (type == "boolean") return doc.is_boolean();
  if (type == "integer") return doc.is_number_integer();
  if (type == "number") return doc.is_number();
  if (type == "string") return doc.is_string();
  if (type == "array") return doc.is_array();
  if (type == "object") return doc.is_object();
  throw std::invalid_argument("schema: unknown type '" + type + "'");
}

std::string pointer_escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string show(const std::string& where) { return where.empty() ? "/" : where; }

}  // namespace

SchemaValidator::SchemaValidator(json schema) : root_(std::move(schema)) {
  if (!root_.is_object()) throw std::invalid_argument("schema must be an object");
}

std::vector<std::string> SchemaValidator::validate(const json& doc) const {
  std::vector<std::string> errors;
  check(root_, doc, "", errors);
  return errors;
}

const json& SchemaValidator::resolve(const std::string& ref) const {
  if (ref.rfind("#", 0) != 0) throw std::invalid_argument("schema: only local $ref supported: " + ref);
  return root_.at(json::json_pointer(ref.substr(1)));
}

void SchemaValidator::check(const json& schema, const json& doc, const std::string& where,
                            std::vector<std::string>& errors) const {
  if (schema.is_boolean()) {
    if (!schema.get<bool>()) errors.push_back(show(where) + ": no value allowed here");
    return;
  }
  for (const auto& [key, value] : schema.items()) {
    if (kAnnotations.count(key)) continue;
    if (key == "$ref") {
      check(resolve(value.get<std::string>()), doc, where, errors);
    } else if (key == "type") {
      bool ok = false;
      if (value.is_string()) {
        ok = has_type(doc, value.get<std::string>());
      } else {
        for (const auto& t : value) ok = ok || has_type(doc, t.get<std::string>());
      }
      if (!ok) errors.push_back(show(where) + ": expected type " + value.dump());
    } else if (key == "const") {
      if (doc != value) errors.push_back(show(where) + ": must equal " + value.dump());
    } else if (key == "enum") {
      bool found = false;
      for (const auto& v : value) found = found || doc == v;
      if (!found) errors.push_back(show(where) + ": must be one of " + value.dump());
    } else if (key == "properties") {
      if (!doc.is_object()) continue;
      for (const auto& [name, sub] : value.items()) {
        if (doc.contains(name)) check(sub, doc.at(name), where + "/" + pointer_escape(name), errors);
      }
    } else if (key == "required") {
      if (!doc.is_object()) continue;
      for (const auto& name : value) {
        if (!doc.contains(name.get<std::string>())) {
          errors.push_back(show(where) + ": missing required property '" + name.get<std::string>() + "'");
        }
      }
    } else if (key == "additionalProperties") {
      if (!doc.is_object()) continue;
      const json* props = schema.contains("properties") ? &schema.at("properties") : nullptr;
      for (const auto& [name, sub] : doc.items()) {
        if (props && props->contains(name)) continue;
        if (value.is_boolean() && !value.get<bool>()) {
          errors.push_back(show(where) + ": unknown property '" + name + "'");
        } else {
          check(value, sub, where + "/" + pointer_escape(name), errors);
        }
      }
    } else if (key == "items") {
      if (!doc.is_array()) continue;
      for (std::size_t i = 0; i < doc.size(); ++i) {
        check(value, doc[i], where + "/" + std::to_string(i), errors);
      }
    } else if (key == "minItems") {
      if (doc.is_array() && doc.size() < value.get<std::size_t>()) {
        errors.push_back(show(where) + ": needs at least " + value.dump() + " items");
      }
    } else if (key == "maxItems") {
      if (doc.is_array() && doc.size() > value.get<std::size_t>()) {
        errors.push_back(show(where) + ": allows at most " + value.dump() + " items");
      }
    } else if (key == "minProperties") {
      if (doc.is_object() && doc.size() < value.get<std::size_t>()) {
        errors.push_back(show(where) + ": needs at least " + value.dump() + " properties");
      }
    } else if (key == "minLength") {
      // Byte length; the shipped schemas only use it to reject empty strings.
      if (doc.is_string() && doc.get<std::string>().size() < value.get<std::size_t>()) {
        errors.push_back(show(where) + ": string too short");
      }
    } else if (key == "minimum" || key == "maximum" || key == "exclusiveMinimum" ||
               key == "exclusiveMaximum") {
      if (!doc.is_number()) continue;
      const double x = doc.get<double>();
      const double bound = value.get<double>();
      const bool ok = key == "minimum"            ? x >= bound
                      : key == "maximum"          ? x <= bound
                      : key == "exclusiveMinimum" ? x > bound
                                                  : x < bound;
      if (!ok) errors.push_back(show(where) + ": " + doc.dump() + " violates " + key + " " + value.dump());
    } else if (key == "oneOf" || key == "anyOf") {
      int matches = 0;
      std::vector<std::string> first_failure;
      for (const auto& option : value) {
        std::vector<std::string> sub;
        check(option, doc, where, sub);
        if (sub.empty()) ++matches;
        else if (first_failure.empty()) first_failure = sub;
      }
      if (key == "oneOf" && matches != 1) {
        std::string msg = show(where) + ": must match exactly one alternative, matched " +
                          std::to_string(matches);
        if (matches == 0 && !first_failure.empty()) msg += " (" + first_failure.front() + ")";
        errors.push_back(msg);
      } else if (key == "anyOf" && matches == 0) {
        errors.push_back(show(where) + ": matches no alternative");
      }
    } else {
      throw std::invalid_argument("schema: unsupported keyword '" + key + "'");
    }
  }
}

}  // namespace molcap::cli
