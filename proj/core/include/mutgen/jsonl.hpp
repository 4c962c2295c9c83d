#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace mutgen {

using Json = nlohmann::json;

struct JsonlStats {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
};

// Streams one JSON object per nonblank line. Malformed lines are reported to
// `diag` (if set) and skipped; the stream is never aborted.
JsonlStats for_each_jsonl(std::istream& in,
                          const std::function<void(std::size_t line_no, Json&&)>& fn,
                          const std::function<void(std::size_t line_no, const std::string& what)>& diag = {});

// Compact single-line dump with sorted object keys, for byte-stable files.
void write_jsonl_line(std::ostream& out, const Json& value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mutgen
