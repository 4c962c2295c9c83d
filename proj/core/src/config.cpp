#include "mutgen/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <limits>
#include <set>

#include "mutgen/jsonl.hpp"

namespace mutgen {

namespace {

bool identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// strips a trailing comment that is not inside a quoted string
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string parse_quoted(std::string_view text, int line_no) {
  if (text.size() < 2 || text.back() != '"')
    throw ConfigError(line_no, "unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 2 >= text.size()) throw ConfigError(line_no, "dangling escape in string");
    ++i;
    switch (text[i]) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: throw ConfigError(line_no, std::string("unsupported escape: \\") + text[i]);
    }
  }
  return out;
}

ConfigValue parse_value(std::string_view text, int line_no) {
  ConfigValue value;
  value.line = line_no;
  if (text.empty()) throw ConfigError(line_no, "missing value");

  if (text.front() == '"') {
    value.kind = ConfigValue::Kind::String;
    value.string_value = parse_quoted(text, line_no);
    return value;
  }
  if (text == "true" || text == "false") {
    value.kind = ConfigValue::Kind::Bool;
    value.bool_value = text == "true";
    return value;
  }

  const std::string body(text);
  const bool looks_float = body.find_first_of(".eE") != std::string::npos;
  char* end = nullptr;
  errno = 0;
  if (!looks_float) {
    const long long parsed = std::strtoll(body.c_str(), &end, 10);
    if (end == body.c_str() + body.size() && errno == 0) {
      value.kind = ConfigValue::Kind::Int;
      value.int_value = parsed;
      return value;
    }
  }
  errno = 0;
  const double parsed = std::strtod(body.c_str(), &end);
  if (end == body.c_str() + body.size() && errno == 0) {
    value.kind = ConfigValue::Kind::Float;
    value.float_value = parsed;
    return value;
  }
  throw ConfigError(line_no, "unrecognized value: " + body);
}

const ConfigValue* find(const ConfigDoc& doc, const std::string& key) {
  auto it = doc.values.find(key);
  return it == doc.values.end() ? nullptr : &it->second;
}

[[noreturn]] void wrong_type(const std::string& key, const ConfigValue& value,
                             const char* wanted) {
  throw ConfigError(value.line, "key " + key + " must be " + wanted);
}

// every key the pipeline schema understands
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "run.seed",          "run.out_dir",        "ingest.corpus",
      "ingest.max_files",  "idioms.file",        "idioms.quantile",
      "extract.max_tokens", "extract.max_actions", "cluster.k",
      "cluster.k_min",     "cluster.k_max",      "cluster.dim",
      "cluster.epochs",    "train.set",          "train.cluster",
      "train.units",       "train.embed_dim",    "train.steps",
      "train.eval_every",  "train.batch_size",   "train.learning_rate",
      "train.clip_norm",   "train.lr_patience",  "mutate.beam",
      "evaluate.bootstrap"};
  return keys;
}

int positive_int(const ConfigDoc& doc, const std::string& key, int fallback) {
  const std::int64_t v = doc.get_int(key, fallback);
  if (v < 1) throw ConfigError("key " + key + " must be positive");
  if (v > std::numeric_limits<int>::max())
    throw ConfigError("key " + key + " is out of range");
  return static_cast<int>(v);
}

double positive_double(const ConfigDoc& doc, const std::string& key, double fallback) {
  const double v = doc.get_double(key, fallback);
  if (!(v > 0.0)) throw ConfigError("key " + key + " must be positive");
  return v;
}

}  // namespace

std::int64_t ConfigDoc::get_int(const std::string& key, std::int64_t fallback) const {
  const ConfigValue* value = find(*this, key);
  if (!value) return fallback;
  if (value->kind != ConfigValue::Kind::Int) wrong_type(key, *value, "an integer");
  return value->int_value;
}

double ConfigDoc::get_double(const std::string& key, double fallback) const {
  const ConfigValue* value = find(*this, key);
  if (!value) return fallback;
  if (value->kind == ConfigValue::Kind::Int)
    return static_cast<double>(value->int_value);
  if (value->kind != ConfigValue::Kind::Float) wrong_type(key, *value, "a number");
  return value->float_value;
}

bool ConfigDoc::get_bool(const std::string& key, bool fallback) const {
  const ConfigValue* value = find(*this, key);
  if (!value) return fallback;
  if (value->kind != ConfigValue::Kind::Bool) wrong_type(key, *value, "a boolean");
  return value->bool_value;
}

std::string ConfigDoc::get_string(const std::string& key, const std::string& fallback) const {
  const ConfigValue* value = find(*this, key);
  if (!value) return fallback;
  if (value->kind != ConfigValue::Kind::String) wrong_type(key, *value, "a string");
  return value->string_value;
}

ConfigDoc parse_config(std::string_view text) {
  ConfigDoc doc;
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(line_no, "empty section name");
      for (char c : name)
        if (!identifier_char(c)) throw ConfigError(line_no, "bad section name");
      section = std::string(name);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    for (char c : key)
      if (!identifier_char(c)) throw ConfigError(line_no, "bad key name");
    if (section.empty()) throw ConfigError(line_no, "key outside any section");

    const std::string full = section + "." + std::string(key);
    if (doc.values.count(full)) throw ConfigError(line_no, "duplicate key: " + full);
    doc.values.emplace(full, parse_value(trim(line.substr(eq + 1)), line_no));
  }
  return doc;
}

ConfigDoc load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path.string()));
}

PipelineConfig pipeline_config_from_doc(const ConfigDoc& doc) {
  for (const auto& [key, value] : doc.values)
    if (!known_keys().count(key))
      throw ConfigError(value.line, "unknown configuration key: " + key);

  PipelineConfig config;

  const std::int64_t seed = doc.get_int("run.seed", 1);
  if (seed < 0) throw ConfigError("key run.seed must be non-negative");
  config.seed = static_cast<std::uint64_t>(seed);
  config.out_dir = doc.get_string("run.out_dir", config.out_dir);
  if (config.out_dir.empty()) throw ConfigError("key run.out_dir must not be empty");

  config.corpus = doc.get_string("ingest.corpus", config.corpus);
  config.max_files = positive_int(doc, "ingest.max_files", config.max_files);

  config.idiom_file = doc.get_string("idioms.file", config.idiom_file);
  config.idiom_quantile = positive_double(doc, "idioms.quantile", config.idiom_quantile);
  if (config.idiom_quantile > 1.0)
    throw ConfigError("key idioms.quantile must be at most 1");

  config.max_tokens = positive_int(doc, "extract.max_tokens", config.max_tokens);
  config.max_actions = positive_int(doc, "extract.max_actions", config.max_actions);

  if (doc.has("cluster.k")) {
    const ConfigValue& k = doc.values.at("cluster.k");
    if (k.kind == ConfigValue::Kind::String) {
      if (k.string_value != "auto")
        throw ConfigError(k.line, "key cluster.k must be \"auto\" or a positive integer");
      config.k_auto = true;
    } else if (k.kind == ConfigValue::Kind::Int && k.int_value >= 1) {
      config.k_auto = false;
      config.k = static_cast<int>(k.int_value);
    } else {
      throw ConfigError(k.line, "key cluster.k must be \"auto\" or a positive integer");
    }
  }
  config.k_min = positive_int(doc, "cluster.k_min", config.k_min);
  config.k_max = positive_int(doc, "cluster.k_max", config.k_max);
  if (config.k_min < 2) throw ConfigError("key cluster.k_min must be at least 2");
  if (config.k_max < config.k_min)
    throw ConfigError("key cluster.k_max must be at least cluster.k_min");
  config.doc_dim = positive_int(doc, "cluster.dim", config.doc_dim);
  config.doc_epochs = positive_int(doc, "cluster.epochs", config.doc_epochs);

  config.train_set = doc.get_string("train.set", config.train_set);
  if (config.train_set != "ident" && config.train_set != "ident_lit")
    throw ConfigError("key train.set must be \"ident\" or \"ident_lit\"");
  if (doc.has("train.cluster")) {
    const std::int64_t c = doc.get_int("train.cluster", 0);
    if (c < 0) throw ConfigError("key train.cluster must be non-negative");
    config.train_cluster = static_cast<int>(c);
  }
  config.train.units = positive_int(doc, "train.units", config.train.units);
  config.train.embed_dim = positive_int(doc, "train.embed_dim", config.train.embed_dim);
  config.train.steps = positive_int(doc, "train.steps", config.train.steps);
  config.train.eval_every = positive_int(doc, "train.eval_every", config.train.eval_every);
  config.train.batch_size = positive_int(doc, "train.batch_size", config.train.batch_size);
  config.train.learning_rate =
      positive_double(doc, "train.learning_rate", config.train.learning_rate);
  config.train.clip_norm = positive_double(doc, "train.clip_norm", config.train.clip_norm);
  config.train.lr_patience = positive_int(doc, "train.lr_patience", config.train.lr_patience);

  config.beam = positive_int(doc, "mutate.beam", config.beam);
  config.bootstrap = positive_int(doc, "evaluate.bootstrap", config.bootstrap);
  return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return pipeline_config_from_doc(load_config(path));
}

}  // namespace mutgen
