#pragma once

// Run configuration: a strict, minimal key-value document with TOML-style
// sections ([section], key = value, # comments). Values are integers,
// floats, booleans, or double-quoted strings. Unknown keys are errors, and
// nothing is read from the environment: a config file plus a seed fully
// determines a run.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mutgen/seq2seq.hpp"

namespace mutgen {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error("config line " + std::to_string(line) + ": " + message),
        line(line) {}
  explicit ConfigError(const std::string& message)
      : std::runtime_error("config: " + message), line(0) {}
  int line;
};

struct ConfigValue {
  enum class Kind { Int, Float, Bool, String };
  Kind kind = Kind::Int;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  bool bool_value = false;
  std::string string_value;
  int line = 0;  // where the value was assigned, for error messages
};

// Parsed document; keys are "section.key".
struct ConfigDoc {
  std::map<std::string, ConfigValue> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  // typed accessors: a present key of the wrong type is an error; a missing
  // key yields the fallback. get_double accepts integer values.
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
};

ConfigDoc parse_config(std::string_view text);
ConfigDoc load_config(const std::filesystem::path& path);

// Everything a full run needs. Defaults are the documented standard
// configuration; a config file overrides them field by field.
struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  // ingest
  std::string corpus;  // required by the pipeline subcommand
  int max_files = 5;

  // idiom mining
  std::string idiom_file;           // pre-made idiom list; empty means mine
  double idiom_quantile = 0.00005;  // top share of the frequency distribution

  // extraction filters
  int max_tokens = 50;
  int max_actions = 100;

  // clustering
  bool k_auto = true;
  int k = 0;  // used when k_auto is false
  int k_min = 2;
  int k_max = 8;
  int doc_dim = 64;
  int doc_epochs = 20;

  // training
  std::string train_set = "ident";   // ident | ident_lit
  std::optional<int> train_cluster;  // restrict training to one cluster
  Seq2SeqConfig train;

  // generation and evaluation
  int beam = 50;
  int bootstrap = 2000;
};

// Validates the whole document against the known key set and the field
// invariants (positive sizes, known set names, k = "auto" or a positive
// integer). Throws ConfigError on violations.
PipelineConfig pipeline_config_from_doc(const ConfigDoc& doc);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace mutgen
