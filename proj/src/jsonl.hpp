#pragma once

// Internal helpers for line-delimited JSON files.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "ideation/error.hpp"

namespace ideation::detail {

/// Calls `visit(record, line_number)` for every non-blank line. Parse
/// failures are reported as kMalformedRecord with the 1-based line number.
inline void for_each_record(const std::filesystem::path& path,
                            const std::function<void(const nlohmann::json&, std::size_t)>& visit) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  path.filename().string() + " line " + std::to_string(line_number) + ": " + e.what());
    }
    try {
      visit(record, line_number);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  path.filename().string() + " line " + std::to_string(line_number) + ": " + e.what());
    }
  }
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

/// Compact dump; nlohmann's default object type keeps keys sorted.
inline std::string canonical(const nlohmann::json& record) { return record.dump(); }

}  // namespace ideation::detail
