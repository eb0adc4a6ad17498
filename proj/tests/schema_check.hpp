// SPDX-License-Identifier: Apache-2.0
// Validator for the JSON Schema keywords used by schema/report.schema.json:
// type, const, enum, required, properties, additionalProperties, items,
// minimum, oneOf and local $ref.
#pragma once

#include <json.hpp>
#include <string>

namespace schema_check {

using nlohmann::json;

inline bool type_ok(const std::string& t, const json& v) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  return false;
}

inline bool validate(const json& root, const json& s, const json& v, const std::string& path,
                     std::string& err) {
  if (s.contains("$ref")) {
    std::string ref = s["$ref"];
    const std::string pre = "#/definitions/";
    if (ref.rfind(pre, 0) != 0) {
      err = path + ": unsupported $ref " + ref;
      return false;
    }
    return validate(root, root["definitions"][ref.substr(pre.size())], v, path, err);
  }
  if (s.contains("type") && !type_ok(s["type"], v)) {
    err = path + ": expected " + s["type"].get<std::string>();
    return false;
  }
  if (s.contains("const") && s["const"] != v) {
    err = path + ": expected constant " + s["const"].dump();
    return false;
  }
  if (s.contains("enum")) {
    bool hit = false;
    for (const auto& e : s["enum"]) hit = hit || e == v;
    if (!hit) {
      err = path + ": value " + v.dump() + " not in enum";
      return false;
    }
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    err = path + ": below minimum";
    return false;
  }
  if (s.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : s["oneOf"]) {
      std::string e;
      if (validate(root, alt, v, path, e)) ++hits;
    }
    if (hits != 1) {
      err = path + ": oneOf matched " + std::to_string(hits);
      return false;
    }
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) {
          err = path + ": missing " + k.get<std::string>();
          return false;
        }
    const json props = s.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        if (!validate(root, props[it.key()], it.value(), path + "/" + it.key(), err)) return false;
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        err = path + ": unexpected key " + it.key();
        return false;
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!validate(root, s["items"], v[i], path + "/" + std::to_string(i), err)) return false;
  }
  return true;
}

inline bool validate(const json& schema, const json& v, std::string& err) {
  return validate(schema, schema, v, "", err);
}

}  // namespace schema_check
