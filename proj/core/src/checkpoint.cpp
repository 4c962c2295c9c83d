#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include "mutgen/jsonl.hpp"
#include "mutgen/seq2seq.hpp"

namespace mutgen {

namespace {

const char* kReservedTokens[] = {"<pad>", "<sos>", "<eos>", "<unk>"};

void append_float_le(std::string& out, float value) {
  std::uint32_t bits = 0;
  std::memcpy(&bits, &value, sizeof bits);
  out.push_back(static_cast<char>(bits & 0xFF));
  out.push_back(static_cast<char>((bits >> 8) & 0xFF));
  out.push_back(static_cast<char>((bits >> 16) & 0xFF));
  out.push_back(static_cast<char>((bits >> 24) & 0xFF));
}

float read_float_le(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             static_cast<std::uint32_t>(p[1]) << 8 |
                             static_cast<std::uint32_t>(p[2]) << 16 |
                             static_cast<std::uint32_t>(p[3]) << 24;
  float value = 0.0f;
  std::memcpy(&value, &bits, sizeof value);
  return value;
}

Json config_to_json(const Seq2SeqConfig& c) {
  Json j;
  j["batch_size"] = c.batch_size;
  j["buckets"] = c.buckets;
  j["clip_norm"] = c.clip_norm;
  j["embed_dim"] = c.embed_dim;
  j["eval_every"] = c.eval_every;
  j["learning_rate"] = c.learning_rate;
  j["lr_patience"] = c.lr_patience;
  j["seed"] = c.seed;
  j["steps"] = c.steps;
  j["units"] = c.units;
  return j;
}

Seq2SeqConfig config_from_json(const Json& j) {
  Seq2SeqConfig c;
  c.batch_size = j.at("batch_size").get<int>();
  c.buckets = j.at("buckets").get<std::vector<int>>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.embed_dim = j.at("embed_dim").get<int>();
  c.eval_every = j.at("eval_every").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.lr_patience = j.at("lr_patience").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.steps = j.at("steps").get<int>();
  c.units = j.at("units").get<int>();
  return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt) {
  std::filesystem::create_directories(dir);
  // read-only walk over the tensors
  auto refs = named_tensors(const_cast<ModelParams&>(ckpt.params));

  Json manifest;
  manifest["config"] = config_to_json(ckpt.config);
  Json tensors = Json::array();
  std::string blob;
  for (const TensorRef& r : refs) {
    Json t;
    t["cols"] = r.cols;
    t["name"] = r.name;
    t["rows"] = r.rows;
    tensors.push_back(std::move(t));
    for (int row = 0; row < r.rows; ++row) {
      for (int col = 0; col < r.cols; ++col) {
        append_float_le(blob, static_cast<float>(r.data[col * r.rows + row]));
      }
    }
  }
  manifest["tensors"] = std::move(tensors);
  manifest["vocab"] = ckpt.vocab.tokens;

  write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  write_file((dir / "weights.bin").string(), blob);
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const Json manifest = Json::parse(read_file((dir / "manifest.json").string()));

  Checkpoint ckpt;
  ckpt.config = config_from_json(manifest.at("config"));

  const auto& vocab_json = manifest.at("vocab");
  if (!vocab_json.is_array() || vocab_json.size() < 4) {
    throw std::runtime_error("checkpoint vocabulary is missing the reserved tokens");
  }
  for (const auto& tok : vocab_json) {
    const std::string token = tok.get<std::string>();
    if (!ckpt.vocab.index.emplace(token, ckpt.vocab.size()).second) {
      throw std::runtime_error("duplicate vocabulary token: " + token);
    }
    ckpt.vocab.tokens.push_back(token);
  }
  for (int i = 0; i < 4; ++i) {
    if (ckpt.vocab.tokens[static_cast<std::size_t>(i)] != kReservedTokens[i]) {
      throw std::runtime_error("reserved vocabulary slots are corrupted");
    }
  }

  ckpt.params =
      make_params(ckpt.vocab.size(), ckpt.config.embed_dim, ckpt.config.units);
  auto refs = named_tensors(ckpt.params);
  const auto& tensors = manifest.at("tensors");
  if (tensors.size() != refs.size()) {
    throw std::runtime_error("checkpoint manifest does not match the model layout");
  }

  const std::string blob = read_file((dir / "weights.bin").string());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& t = tensors[i];
    if (t.at("name").get<std::string>() != refs[i].name ||
        t.at("rows").get<int>() != refs[i].rows ||
        t.at("cols").get<int>() != refs[i].cols) {
      throw std::runtime_error("checkpoint tensor mismatch at " + refs[i].name);
    }
    const std::size_t need =
        4u * static_cast<std::size_t>(refs[i].rows) * static_cast<std::size_t>(refs[i].cols);
    if (offset + need > blob.size()) {
      throw std::runtime_error("checkpoint weights are truncated at " + refs[i].name);
    }
    const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data()) + offset;
    for (int row = 0; row < refs[i].rows; ++row) {
      for (int col = 0; col < refs[i].cols; ++col) {
        refs[i].data[col * refs[i].rows + row] = static_cast<double>(read_float_le(bytes));
        bytes += 4;
      }
    }
    offset += need;
  }
  if (offset != blob.size()) {
    throw std::runtime_error("checkpoint weights contain trailing bytes");
  }
  return ckpt;
}

}  // namespace mutgen
