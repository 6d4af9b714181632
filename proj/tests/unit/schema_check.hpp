#pragma once

// Enough of JSON Schema to check our own published schemas: type, enum,
// required, properties, items. Returns the first violation as a JSON pointer.

#include <string>

#include <json.hpp>

namespace schema_check {

inline bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

inline std::string violation(const nlohmann::json& v, const nlohmann::json& s, const std::string& at = "") {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_string()) {
      ok = has_type(v, s["type"]);
    } else {
      for (const auto& t : s["type"]) ok = ok || has_type(v, t);
    }
    if (!ok) return at + ": wrong type";
  }
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s["enum"]) ok = ok || e == v;
    if (!ok) return at + ": not in enum";
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) return at + "/" + k.get<std::string>() + ": missing";
    if (s.contains("properties"))
      for (const auto& [k, sub] : s["properties"].items())
        if (v.contains(k)) {
          auto w = violation(v[k], sub, at + "/" + k);
          if (!w.empty()) return w;
        }
  }
  if (v.is_array() && s.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto w = violation(v[i], s["items"], at + "/" + std::to_string(i));
      if (!w.empty()) return w;
    }
  return "";
}

}  // namespace schema_check
