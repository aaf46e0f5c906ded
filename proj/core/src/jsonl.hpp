#pragma once

// Internal helpers shared by the JSON Lines readers and writers.

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "radlabel/error.hpp"

namespace radlabel::detail {

using json = nlohmann::json;

inline std::string dump_compact(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

// Calls `fn(line_number, line)` for every non-blank line. Line numbers are
// 1-based.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn);
void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, std::string_view)>& fn);

// Parses one JSON object; throws DataError mentioning `where` on failure.
json parse_object(std::string_view line, const std::string& where);

const std::string& require_string(const json& obj, const char* field,
                                  const std::string& where);

std::ofstream open_for_write(const std::filesystem::path& path);

}  // namespace radlabel::detail
