#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mutgen/dataset.hpp"

namespace mutgen {

class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// token <-> dense index bijection with fixed reserved slots
struct Vocabulary {
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  std::vector<std::string> tokens;  // index -> token, reserved first
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(tokens.size()); }
  int encode(const std::string& token) const;  // kUnk when absent
  const std::string& decode(int id) const;
  std::vector<int> encode_all(const std::vector<std::string>& toks) const;
};

// reserved tokens plus every token on either side of the training pairs,
// in first-seen order (fixed side before buggy side, pairs in input order)
Vocabulary build_vocab(const std::vector<TransformationPair>& train);

struct Seq2SeqConfig {
  int embed_dim = 256;
  int units = 256;
  double learning_rate = 0.5;
  double clip_norm = 5.0;
  int batch_size = 32;
  int steps = 5000;
  int eval_every = 1000;
  int lr_patience = 3;  // halve lr after this many evals without improvement
  std::vector<int> buckets = {10, 20, 30, 40, 50};
  std::uint64_t seed = 1;
};

struct GruParams {
  Eigen::MatrixXd wz, uz, wr, ur, wh, uh;  // w*: units x in, u*: units x units
  Eigen::VectorXd bz, br, bh;
};

// z = sigmoid(wz x + uz h + bz), r = sigmoid(wr x + ur h + br),
// hbar = tanh(wh x + uh (r . h) + bh), h' = (1 - z) . h + z . hbar
Eigen::VectorXd gru_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                              const GruParams& params);

struct ModelParams {
  int vocab = 0;
  int embed_dim = 0;
  int units = 0;
  Eigen::MatrixXd embedding;               // vocab x d, shared by both sides
  GruParams enc_fwd, enc_bwd;              // input d
  GruParams dec_bottom;                    // input d + 2u (token embedding + context)
  GruParams dec_top;                       // input u
  Eigen::MatrixXd att_w;                   // u x u, query projection
  Eigen::MatrixXd att_u;                   // u x 2u, state projection
  Eigen::VectorXd att_v;                   // u
  Eigen::MatrixXd out_w;                   // vocab x u
  Eigen::VectorXd out_b;                   // vocab
};

// zero-filled parameter set with consistent shapes
ModelParams make_params(int vocab, int embed_dim, int units);
// uniform [-0.08, 0.08) init, one derived stream per tensor
ModelParams init_params(int vocab, int embed_dim, int units, std::uint64_t seed);
ModelParams zero_like(const ModelParams& params);

// flat named view over every tensor, in checkpoint manifest order; data is
// Eigen column-major storage of rows x cols coefficients
struct TensorRef {
  std::string name;
  double* data;
  int rows;
  int cols;
};
std::vector<TensorRef> named_tensors(ModelParams& params);

// row i = [forward state after x_1..x_i ; backward state after x_n..x_i]
Eigen::MatrixXd encode(const std::vector<int>& input, const ModelParams& params);

// scores e_t = v . tanh(att_w s + att_u h_t); returns (context, weights)
std::pair<Eigen::VectorXd, Eigen::VectorXd> attention_context(const Eigen::VectorXd& s,
                                                              const Eigen::MatrixXd& h,
                                                              const ModelParams& params);

struct Example {
  std::vector<int> input;   // source ids, no sentinels
  std::vector<int> target;  // target ids, no sentinels (EOS handled internally)
};

// teacher-forced mean NLL; per example the mean is over its target tokens
// plus EOS, the batch value is the mean over examples
double batch_loss(const ModelParams& params, const std::vector<Example>& batch);

// same forward, also accumulates dLoss/dparams into grads; returns the loss
double batch_gradients(const ModelParams& params, const std::vector<Example>& batch,
                       ModelParams& grads);

// one SGD update with global-norm clipping; throws NumericalOverflow if the
// loss or a gradient is not finite
double train_step(ModelParams& params, const std::vector<Example>& batch, double lr,
                  double clip_norm);

// argmax decode from SOS until EOS or ceil(1.5 x input length) emissions
std::vector<int> predict_greedy_ids(const ModelParams& params,
                                    const std::vector<int>& input);

struct BeamHypothesis {
  std::vector<int> tokens;  // no sentinels
  double score = 0.0;       // log probability / emitted length (EOS included)
};

// up to `width` distinct sequences, best normalized score first; width 1
// reproduces predict_greedy_ids
std::vector<BeamHypothesis> predict_beam_ids(const ModelParams& params,
                                             const std::vector<int>& input, int width);

struct Checkpoint {
  Vocabulary vocab;
  ModelParams params;
  Seq2SeqConfig config;
};

std::vector<std::string> predict_greedy(const Checkpoint& ckpt,
                                        const std::vector<std::string>& tokens);
std::vector<std::vector<std::string>> predict_beam(const Checkpoint& ckpt,
                                                   const std::vector<std::string>& tokens,
                                                   int width);

struct TrainLogEntry {
  int step = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  Checkpoint best;   // lowest validation loss (final weights if never evaluated)
  Checkpoint last;   // weights after the final step
  std::vector<TrainLogEntry> log;
};

// vocabulary comes from the train split only; validation loss every
// config.eval_every steps, lr halved after config.lr_patience evals without
// improvement
TrainResult train_model(const DatasetSplit& split, const Seq2SeqConfig& config);

// manifest.json (config, shapes, vocab) + weights.bin (row-major
// little-endian float32 per tensor, manifest order)
void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace mutgen
