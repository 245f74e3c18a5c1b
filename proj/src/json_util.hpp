#pragma once

// Internal helpers for the JSON file formats.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "noesis/context.hpp"
#include "noesis/error.hpp"

namespace noesis::detail {

using json = nlohmann::json;

inline json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = line_of_offset(bytes, offset);
    std::size_t line_start = bytes.rfind('\n', offset == 0 ? 0 : offset - 1);
    std::size_t column = line_start == std::string_view::npos ? offset + 1 : offset - line_start;
    throw ParseError(e.what(), line, column);
  }
}

[[noreturn]] inline void schema_error(const std::string& what) { throw ParseError(what, 0); }

inline const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing key '") + key + "'");
  return *it;
}

inline std::string as_string(const json& v, const char* what) {
  if (!v.is_string()) schema_error(std::string(what) + " must be a string");
  return v.get<std::string>();
}

inline std::vector<std::string> as_string_list(const json& v, const char* what) {
  if (!v.is_array()) schema_error(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_string(x, what));
  return out;
}

inline std::uint64_t as_count(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    schema_error(std::string(what) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline json names_json(const std::vector<std::string>& names) {
  json a = json::array();
  for (const auto& n : names) a.push_back(n);
  return a;
}

}  // namespace noesis::detail
