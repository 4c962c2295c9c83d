#include "mutgen/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mutgen {

JsonlStats for_each_jsonl(std::istream& in,
                          const std::function<void(std::size_t, Json&&)>& fn,
                          const std::function<void(std::size_t, const std::string&)>& diag) {
  JsonlStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++stats.lines;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    Json value = Json::parse(line, nullptr, false);
    if (value.is_discarded()) {
      ++stats.malformed;
      if (diag) diag(line_no, "invalid JSON");
      continue;
    }
    ++stats.parsed;
    fn(line_no, std::move(value));
  }
  return stats;
}

void write_jsonl_line(std::ostream& out, const Json& value) {
  out << value.dump() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace mutgen
