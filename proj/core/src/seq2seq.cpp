#include "mutgen/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mutgen/rng.hpp"

namespace mutgen {

namespace {

const char* kReserved[] = {"<pad>", "<sos>", "<eos>", "<unk>"};

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double mx = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - mx).exp();
  return p / p.sum();
}

double log_sum_exp(const Eigen::VectorXd& logits) {
  const double mx = logits.maxCoeff();
  return mx + std::log((logits.array() - mx).exp().sum());
}

// one GRU application with everything the backward pass needs
struct GruStep {
  Eigen::VectorXd x, h_prev, z, r, rh, hbar, h_new;
};

GruStep gru_forward(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                    const GruParams& p) {
  GruStep s;
  s.x = x;
  s.h_prev = h;
  s.z = sigmoid(p.wz * x + p.uz * h + p.bz);
  s.r = sigmoid(p.wr * x + p.ur * h + p.br);
  s.rh = s.r.cwiseProduct(h);
  s.hbar = (p.wh * x + p.uh * s.rh + p.bh).array().tanh().matrix();
  s.h_new = ((1.0 - s.z.array()) * h.array() + s.z.array() * s.hbar.array()).matrix();
  return s;
}

// accumulates parameter gradients and the gradients wrt both inputs
void gru_backward(const GruStep& s, const GruParams& p, const Eigen::VectorXd& dh_new,
                  GruParams& g, Eigen::VectorXd& dx, Eigen::VectorXd& dh_prev) {
  const Eigen::VectorXd dz = dh_new.cwiseProduct(s.hbar - s.h_prev);
  const Eigen::VectorXd dhbar = dh_new.cwiseProduct(s.z);
  dh_prev += dh_new.cwiseProduct((1.0 - s.z.array()).matrix());

  const Eigen::VectorXd dhbar_pre =
      dhbar.cwiseProduct((1.0 - s.hbar.array().square()).matrix());
  g.wh += dhbar_pre * s.x.transpose();
  g.uh += dhbar_pre * s.rh.transpose();
  g.bh += dhbar_pre;
  dx += p.wh.transpose() * dhbar_pre;
  const Eigen::VectorXd drh = p.uh.transpose() * dhbar_pre;
  const Eigen::VectorXd dr = drh.cwiseProduct(s.h_prev);
  dh_prev += drh.cwiseProduct(s.r);

  const Eigen::VectorXd dr_pre =
      dr.cwiseProduct(s.r.cwiseProduct((1.0 - s.r.array()).matrix()));
  g.wr += dr_pre * s.x.transpose();
  g.ur += dr_pre * s.h_prev.transpose();
  g.br += dr_pre;
  dx += p.wr.transpose() * dr_pre;
  dh_prev += p.ur.transpose() * dr_pre;

  const Eigen::VectorXd dz_pre =
      dz.cwiseProduct(s.z.cwiseProduct((1.0 - s.z.array()).matrix()));
  g.wz += dz_pre * s.x.transpose();
  g.uz += dz_pre * s.h_prev.transpose();
  g.bz += dz_pre;
  dx += p.wz.transpose() * dz_pre;
  dh_prev += p.uz.transpose() * dz_pre;
}

struct AttnStep {
  Eigen::VectorXd s;   // query
  Eigen::MatrixXd tq;  // n x u, row t = tanh(att_w s + att_u h_t)
  Eigen::VectorXd a;   // n
  Eigen::VectorXd c;   // 2u
};

AttnStep attn_forward(const Eigen::VectorXd& s, const Eigen::MatrixXd& h,
                      const ModelParams& p) {
  const auto n = h.rows();
  AttnStep st;
  st.s = s;
  const Eigen::VectorXd ws = p.att_w * s;
  st.tq.resize(n, p.units);
  Eigen::VectorXd e(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    st.tq.row(t) =
        (ws + p.att_u * h.row(t).transpose()).array().tanh().matrix().transpose();
    e(t) = st.tq.row(t).dot(p.att_v);
  }
  st.a = softmax(e);
  st.c = h.transpose() * st.a;
  return st;
}

void attn_backward(const AttnStep& st, const Eigen::MatrixXd& h, const ModelParams& p,
                   const Eigen::VectorXd& dc, ModelParams& g, Eigen::VectorXd& ds,
                   Eigen::MatrixXd& dh) {
  const auto n = h.rows();
  const Eigen::VectorXd da = h * dc;
  dh += st.a * dc.transpose();

  const double mixed = st.a.dot(da);
  const Eigen::VectorXd de = st.a.cwiseProduct((da.array() - mixed).matrix());
  Eigen::VectorXd dq_sum = Eigen::VectorXd::Zero(p.units);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd tq = st.tq.row(t).transpose();
    g.att_v += de(t) * tq;
    const Eigen::VectorXd dq =
        (de(t) * p.att_v.array() * (1.0 - tq.array().square())).matrix();
    g.att_u += dq * h.row(t);
    dh.row(t) += (p.att_u.transpose() * dq).transpose();
    dq_sum += dq;
  }
  g.att_w += dq_sum * st.s.transpose();
  ds += p.att_w.transpose() * dq_sum;
}

Eigen::VectorXd embed_token(const ModelParams& p, int id) {
  if (id < 0 || id >= p.vocab) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary");
  }
  return p.embedding.row(id).transpose();
}

void encode_cached(const std::vector<int>& input, const ModelParams& p,
                   std::vector<GruStep>& fwd, std::vector<GruStep>& bwd,
                   Eigen::MatrixXd& h) {
  const auto n = static_cast<Eigen::Index>(input.size());
  if (n == 0) throw EmptyInput("cannot encode an empty token sequence");
  fwd.clear();
  bwd.clear();
  fwd.reserve(input.size());
  bwd.resize(input.size());

  Eigen::VectorXd state = Eigen::VectorXd::Zero(p.units);
  for (std::size_t i = 0; i < input.size(); ++i) {
    fwd.push_back(gru_forward(embed_token(p, input[i]), state, p.enc_fwd));
    state = fwd.back().h_new;
  }
  state = Eigen::VectorXd::Zero(p.units);
  for (std::size_t i = input.size(); i-- > 0;) {
    bwd[i] = gru_forward(embed_token(p, input[i]), state, p.enc_bwd);
    state = bwd[i].h_new;
  }

  h.resize(n, 2 * p.units);
  for (Eigen::Index i = 0; i < n; ++i) {
    h.row(i).head(p.units) = fwd[static_cast<std::size_t>(i)].h_new.transpose();
    h.row(i).tail(p.units) = bwd[static_cast<std::size_t>(i)].h_new.transpose();
  }
}

struct DecStep {
  AttnStep att;
  GruStep bottom, top;
  Eigen::VectorXd probs;
  int prev_token = Vocabulary::kSos;
};

// advances one teacher-forced or decoded step; the query is the previous
// top-layer state
DecStep decode_step(const ModelParams& p, const Eigen::MatrixXd& h, int prev_token,
                    const Eigen::VectorXd& s_bottom, const Eigen::VectorXd& s_top) {
  DecStep st;
  st.prev_token = prev_token;
  st.att = attn_forward(s_top, h, p);
  Eigen::VectorXd x(p.embed_dim + 2 * p.units);
  x.head(p.embed_dim) = embed_token(p, prev_token);
  x.tail(2 * p.units) = st.att.c;
  st.bottom = gru_forward(x, s_bottom, p.dec_bottom);
  st.top = gru_forward(st.bottom.h_new, s_top, p.dec_top);
  st.probs = softmax(p.out_w * st.top.h_new + p.out_b);
  return st;
}

struct ExampleTape {
  std::vector<int> input;
  std::vector<GruStep> enc_fwd, enc_bwd;
  Eigen::MatrixXd h;
  std::vector<DecStep> steps;
  std::vector<int> targets;  // includes the closing EOS
  double loss = 0.0;
};

ExampleTape forward_example(const ModelParams& p, const Example& ex) {
  ExampleTape tape;
  tape.input = ex.input;
  encode_cached(ex.input, p, tape.enc_fwd, tape.enc_bwd, tape.h);
  tape.targets = ex.target;
  tape.targets.push_back(Vocabulary::kEos);

  Eigen::VectorXd s_bottom = Eigen::VectorXd::Zero(p.units);
  Eigen::VectorXd s_top = Eigen::VectorXd::Zero(p.units);
  int prev = Vocabulary::kSos;
  double nll = 0.0;
  for (const int target : tape.targets) {
    tape.steps.push_back(decode_step(p, tape.h, prev, s_bottom, s_top));
    const DecStep& st = tape.steps.back();
    nll -= std::log(st.probs(target));
    s_bottom = st.bottom.h_new;
    s_top = st.top.h_new;
    prev = target;
  }
  tape.loss = nll / static_cast<double>(tape.targets.size());
  return tape;
}

void backward_example(const ModelParams& p, const ExampleTape& tape, double scale,
                      ModelParams& g) {
  const auto n = tape.h.rows();
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(n, 2 * p.units);
  Eigen::VectorXd ds_bottom = Eigen::VectorXd::Zero(p.units);
  Eigen::VectorXd ds_top = Eigen::VectorXd::Zero(p.units);
  const double step_scale = scale / static_cast<double>(tape.targets.size());

  for (std::size_t t = tape.steps.size(); t-- > 0;) {
    const DecStep& st = tape.steps[t];
    Eigen::VectorXd dlogits = st.probs * step_scale;
    dlogits(tape.targets[t]) -= step_scale;
    g.out_w += dlogits * st.top.h_new.transpose();
    g.out_b += dlogits;

    const Eigen::VectorXd ds2 = ds_top + p.out_w.transpose() * dlogits;
    Eigen::VectorXd d_bottom_out = Eigen::VectorXd::Zero(p.units);
    Eigen::VectorXd ds_top_prev = Eigen::VectorXd::Zero(p.units);
    gru_backward(st.top, p.dec_top, ds2, g.dec_top, d_bottom_out, ds_top_prev);

    const Eigen::VectorXd ds1 = ds_bottom + d_bottom_out;
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(p.embed_dim + 2 * p.units);
    Eigen::VectorXd ds_bottom_prev = Eigen::VectorXd::Zero(p.units);
    gru_backward(st.bottom, p.dec_bottom, ds1, g.dec_bottom, dx, ds_bottom_prev);

    g.embedding.row(st.prev_token) += dx.head(p.embed_dim).transpose();
    const Eigen::VectorXd dc = dx.tail(2 * p.units);
    Eigen::VectorXd dquery = Eigen::VectorXd::Zero(p.units);
    attn_backward(st.att, tape.h, p, dc, g, dquery, dh);

    ds_top = ds_top_prev + dquery;
    ds_bottom = ds_bottom_prev;
  }

  // encoder; dh rows split back into the two directions
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(p.units);
  for (std::size_t i = tape.enc_fwd.size(); i-- > 0;) {
    const Eigen::VectorXd total =
        carry + dh.row(static_cast<Eigen::Index>(i)).head(p.units).transpose();
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(p.embed_dim);
    carry.setZero();
    gru_backward(tape.enc_fwd[i], p.enc_fwd, total, g.enc_fwd, dx, carry);
    g.embedding.row(tape.input[i]) += dx.transpose();
  }
  carry.setZero();
  for (std::size_t i = 0; i < tape.enc_bwd.size(); ++i) {
    const Eigen::VectorXd total =
        carry + dh.row(static_cast<Eigen::Index>(i)).tail(p.units).transpose();
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(p.embed_dim);
    carry.setZero();
    gru_backward(tape.enc_bwd[i], p.enc_bwd, total, g.enc_bwd, dx, carry);
    g.embedding.row(tape.input[i]) += dx.transpose();
  }
}

}  // namespace

int Vocabulary::encode(const std::string& token) const {
  const auto it = index.find(token);
  return it == index.end() ? kUnk : it->second;
}

const std::string& Vocabulary::decode(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id out of range");
  return tokens[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode_all(const std::vector<std::string>& toks) const {
  std::vector<int> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(encode(t));
  return out;
}

Vocabulary build_vocab(const std::vector<TransformationPair>& train) {
  if (train.empty()) throw EmptyInput("cannot build a vocabulary from no pairs");
  Vocabulary v;
  for (const char* r : kReserved) {
    v.index.emplace(r, v.size());
    v.tokens.emplace_back(r);
  }
  const auto add = [&v](const std::vector<std::string>& toks) {
    for (const auto& t : toks) {
      if (v.index.try_emplace(t, v.size()).second) v.tokens.push_back(t);
    }
  };
  for (const auto& tp : train) {
    add(tp.abstract_f);
    add(tp.abstract_b);
  }
  return v;
}

Eigen::VectorXd gru_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                              const GruParams& params) {
  if (params.wz.cols() != x.size() || params.uz.cols() != h.size() ||
      params.wz.rows() != h.size()) {
    throw ShapeMismatch("gru input shapes do not match the parameters");
  }
  return gru_forward(x, h, params).h_new;
}

namespace {

GruParams make_gru(int in, int units) {
  GruParams g;
  g.wz = Eigen::MatrixXd::Zero(units, in);
  g.uz = Eigen::MatrixXd::Zero(units, units);
  g.wr = Eigen::MatrixXd::Zero(units, in);
  g.ur = Eigen::MatrixXd::Zero(units, units);
  g.wh = Eigen::MatrixXd::Zero(units, in);
  g.uh = Eigen::MatrixXd::Zero(units, units);
  g.bz = Eigen::VectorXd::Zero(units);
  g.br = Eigen::VectorXd::Zero(units);
  g.bh = Eigen::VectorXd::Zero(units);
  return g;
}

}  // namespace

ModelParams make_params(int vocab, int embed_dim, int units) {
  if (vocab < 4 || embed_dim < 1 || units < 1) {
    throw ShapeMismatch("model sizes must be positive and cover reserved tokens");
  }
  ModelParams p;
  p.vocab = vocab;
  p.embed_dim = embed_dim;
  p.units = units;
  p.embedding = Eigen::MatrixXd::Zero(vocab, embed_dim);
  p.enc_fwd = make_gru(embed_dim, units);
  p.enc_bwd = make_gru(embed_dim, units);
  p.dec_bottom = make_gru(embed_dim + 2 * units, units);
  p.dec_top = make_gru(units, units);
  p.att_w = Eigen::MatrixXd::Zero(units, units);
  p.att_u = Eigen::MatrixXd::Zero(units, 2 * units);
  p.att_v = Eigen::VectorXd::Zero(units);
  p.out_w = Eigen::MatrixXd::Zero(vocab, units);
  p.out_b = Eigen::VectorXd::Zero(vocab);
  return p;
}

ModelParams init_params(int vocab, int embed_dim, int units, std::uint64_t seed) {
  ModelParams p = make_params(vocab, embed_dim, units);
  auto refs = named_tensors(p);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    Rng rng(derive_seed(seed, 0x7E0000 + i));
    const std::size_t len =
        static_cast<std::size_t>(refs[i].rows) * static_cast<std::size_t>(refs[i].cols);
    for (std::size_t j = 0; j < len; ++j) {
      refs[i].data[j] = (rng.next_double() - 0.5) * 0.16;
    }
  }
  return p;
}

ModelParams zero_like(const ModelParams& params) {
  return make_params(params.vocab, params.embed_dim, params.units);
}

std::vector<TensorRef> named_tensors(ModelParams& p) {
  std::vector<TensorRef> refs;
  const auto mat = [&refs](const std::string& name, Eigen::MatrixXd& m) {
    refs.push_back({name, m.data(), static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  };
  const auto vec = [&refs](const std::string& name, Eigen::VectorXd& v) {
    refs.push_back({name, v.data(), static_cast<int>(v.size()), 1});
  };
  const auto gru = [&](const std::string& prefix, GruParams& g) {
    mat(prefix + ".wz", g.wz);
    mat(prefix + ".uz", g.uz);
    vec(prefix + ".bz", g.bz);
    mat(prefix + ".wr", g.wr);
    mat(prefix + ".ur", g.ur);
    vec(prefix + ".br", g.br);
    mat(prefix + ".wh", g.wh);
    mat(prefix + ".uh", g.uh);
    vec(prefix + ".bh", g.bh);
  };
  mat("embedding", p.embedding);
  gru("enc_fwd", p.enc_fwd);
  gru("enc_bwd", p.enc_bwd);
  gru("dec_bottom", p.dec_bottom);
  gru("dec_top", p.dec_top);
  mat("att.w", p.att_w);
  mat("att.u", p.att_u);
  vec("att.v", p.att_v);
  mat("out.w", p.out_w);
  vec("out.b", p.out_b);
  return refs;
}

Eigen::MatrixXd encode(const std::vector<int>& input, const ModelParams& params) {
  std::vector<GruStep> fwd, bwd;
  Eigen::MatrixXd h;
  encode_cached(input, params, fwd, bwd, h);
  return h;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> attention_context(const Eigen::VectorXd& s,
                                                              const Eigen::MatrixXd& h,
                                                              const ModelParams& params) {
  if (h.rows() == 0) throw EmptyInput("attention needs at least one encoder state");
  if (s.size() != params.att_w.cols() || h.cols() != params.att_u.cols()) {
    throw ShapeMismatch("attention input shapes do not match the parameters");
  }
  AttnStep st = attn_forward(s, h, params);
  return {std::move(st.c), std::move(st.a)};
}

double batch_loss(const ModelParams& params, const std::vector<Example>& batch) {
  if (batch.empty()) throw EmptyInput("empty batch");
  double loss = 0.0;
  for (const Example& ex : batch) loss += forward_example(params, ex).loss;
  return loss / static_cast<double>(batch.size());
}

double batch_gradients(const ModelParams& params, const std::vector<Example>& batch,
                       ModelParams& grads) {
  if (batch.empty()) throw EmptyInput("empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Example& ex : batch) {
    ExampleTape tape = forward_example(params, ex);
    loss += tape.loss * scale;
    backward_example(params, tape, scale, grads);
  }
  return loss;
}

double train_step(ModelParams& params, const std::vector<Example>& batch, double lr,
                  double clip_norm) {
  ModelParams grads = zero_like(params);
  const double loss = batch_gradients(params, batch, grads);
  if (!std::isfinite(loss)) throw NumericalOverflow("loss is not finite");

  auto grad_refs = named_tensors(grads);
  double norm_sq = 0.0;
  for (const TensorRef& r : grad_refs) {
    const std::size_t len = static_cast<std::size_t>(r.rows) * static_cast<std::size_t>(r.cols);
    for (std::size_t i = 0; i < len; ++i) norm_sq += r.data[i] * r.data[i];
  }
  if (!std::isfinite(norm_sq)) throw NumericalOverflow("gradient is not finite");
  const double norm = std::sqrt(norm_sq);
  const double step = clip_norm > 0.0 && norm > clip_norm ? lr * clip_norm / norm : lr;

  auto param_refs = named_tensors(params);
  for (std::size_t t = 0; t < param_refs.size(); ++t) {
    const std::size_t len = static_cast<std::size_t>(param_refs[t].rows) *
                            static_cast<std::size_t>(param_refs[t].cols);
    for (std::size_t i = 0; i < len; ++i) {
      param_refs[t].data[i] -= step * grad_refs[t].data[i];
    }
  }
  return loss;
}

namespace {

int decode_cap(std::size_t input_len) {
  return static_cast<int>((3 * input_len + 1) / 2);
}

int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

}  // namespace

std::vector<int> predict_greedy_ids(const ModelParams& params,
                                    const std::vector<int>& input) {
  const Eigen::MatrixXd h = encode(input, params);
  Eigen::VectorXd s_bottom = Eigen::VectorXd::Zero(params.units);
  Eigen::VectorXd s_top = Eigen::VectorXd::Zero(params.units);
  int prev = Vocabulary::kSos;
  const int cap = decode_cap(input.size());

  std::vector<int> out;
  while (static_cast<int>(out.size()) < cap) {
    const DecStep st = decode_step(params, h, prev, s_bottom, s_top);
    const int tok = argmax_lowest(st.probs);
    if (tok == Vocabulary::kEos) break;
    out.push_back(tok);
    prev = tok;
    s_bottom = st.bottom.h_new;
    s_top = st.top.h_new;
  }
  return out;
}

std::vector<BeamHypothesis> predict_beam_ids(const ModelParams& params,
                                             const std::vector<int>& input, int width) {
  if (width < 1) throw std::invalid_argument("beam width must be at least 1");
  const Eigen::MatrixXd h = encode(input, params);
  const int cap = decode_cap(input.size());

  struct Hyp {
    std::vector<int> tokens;
    Eigen::VectorXd s_bottom, s_top;
    double logp = 0.0;
  };
  std::vector<Hyp> live(1);
  live[0].s_bottom = Eigen::VectorXd::Zero(params.units);
  live[0].s_top = Eigen::VectorXd::Zero(params.units);

  std::vector<BeamHypothesis> pool;
  std::set<std::vector<int>> seen;
  const auto finish = [&pool, &seen](std::vector<int> tokens, double logp,
                                     std::size_t emitted) {
    if (!seen.insert(tokens).second) return;
    pool.push_back({std::move(tokens), logp / static_cast<double>(emitted)});
  };

  for (int step = 0; step < cap && !live.empty(); ++step) {
    struct Cand {
      std::size_t hyp;
      int token;
      double logp;
    };
    std::vector<Cand> cands;
    std::vector<DecStep> advanced(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      const int prev = live[i].tokens.empty() ? Vocabulary::kSos : live[i].tokens.back();
      advanced[i] = decode_step(params, h, prev, live[i].s_bottom, live[i].s_top);
      const Eigen::VectorXd logs = advanced[i].probs.array().log();
      // per-hypothesis shortlist keeps the global sort small
      std::vector<int> ids(static_cast<std::size_t>(logs.size()));
      std::iota(ids.begin(), ids.end(), 0);
      std::stable_sort(ids.begin(), ids.end(),
                       [&logs](int a, int b) { return logs(a) > logs(b); });
      const std::size_t take = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(width));
      for (std::size_t j = 0; j < take; ++j) {
        cands.push_back({i, ids[j], live[i].logp + logs(ids[j])});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.logp != b.logp) return a.logp > b.logp;
      if (a.hyp != b.hyp) return a.hyp < b.hyp;
      return a.token < b.token;
    });
    if (cands.size() > static_cast<std::size_t>(width)) cands.resize(static_cast<std::size_t>(width));

    std::vector<Hyp> next;
    for (const Cand& c : cands) {
      const Hyp& src = live[c.hyp];
      if (c.token == Vocabulary::kEos) {
        finish(src.tokens, c.logp, src.tokens.size() + 1);
        continue;
      }
      std::vector<int> tokens = src.tokens;
      tokens.push_back(c.token);
      if (static_cast<int>(tokens.size()) == cap) {
        finish(std::move(tokens), c.logp, static_cast<std::size_t>(cap));
        continue;
      }
      Hyp ext;
      ext.tokens = std::move(tokens);
      ext.s_bottom = advanced[c.hyp].bottom.h_new;
      ext.s_top = advanced[c.hyp].top.h_new;
      ext.logp = c.logp;
      next.push_back(std::move(ext));
    }
    live = std::move(next);
  }

  std::stable_sort(pool.begin(), pool.end(),
                   [](const BeamHypothesis& a, const BeamHypothesis& b) {
                     return a.score > b.score;
                   });
  if (pool.size() > static_cast<std::size_t>(width)) pool.resize(static_cast<std::size_t>(width));
  return pool;
}

std::vector<std::string> predict_greedy(const Checkpoint& ckpt,
                                        const std::vector<std::string>& tokens) {
  const std::vector<int> ids = predict_greedy_ids(ckpt.params, ckpt.vocab.encode_all(tokens));
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const int id : ids) out.push_back(ckpt.vocab.decode(id));
  return out;
}

std::vector<std::vector<std::string>> predict_beam(const Checkpoint& ckpt,
                                                   const std::vector<std::string>& tokens,
                                                   int width) {
  const auto hyps = predict_beam_ids(ckpt.params, ckpt.vocab.encode_all(tokens), width);
  std::vector<std::vector<std::string>> out;
  out.reserve(hyps.size());
  for (const auto& hyp : hyps) {
    std::vector<std::string> toks;
    toks.reserve(hyp.tokens.size());
    for (const int id : hyp.tokens) toks.push_back(ckpt.vocab.decode(id));
    out.push_back(std::move(toks));
  }
  return out;
}

TrainResult train_model(const DatasetSplit& split, const Seq2SeqConfig& config) {
  if (split.train.empty()) throw EmptyInput("training split is empty");
  Vocabulary vocab = build_vocab(split.train);

  const auto to_examples = [&vocab](const std::vector<TransformationPair>& tps) {
    std::vector<Example> out;
    out.reserve(tps.size());
    for (const auto& tp : tps) {
      out.push_back({vocab.encode_all(tp.abstract_f), vocab.encode_all(tp.abstract_b)});
    }
    return out;
  };
  const std::vector<Example> train_ex = to_examples(split.train);
  const std::vector<Example> val_ex = to_examples(split.validation);

  // bucket by the longer side so batches group similar lengths
  std::vector<std::vector<std::size_t>> groups;
  {
    std::vector<std::vector<std::size_t>> raw(config.buckets.empty()
                                                  ? 1
                                                  : config.buckets.size());
    for (std::size_t i = 0; i < train_ex.size(); ++i) {
      const std::size_t len =
          std::max(train_ex[i].input.size(), train_ex[i].target.size() + 1);
      std::size_t slot = raw.size() - 1;
      for (std::size_t b = 0; b < config.buckets.size(); ++b) {
        if (len <= static_cast<std::size_t>(config.buckets[b])) {
          slot = b;
          break;
        }
      }
      raw[slot].push_back(i);
    }
    for (auto& g : raw)
      if (!g.empty()) groups.push_back(std::move(g));
  }

  ModelParams params = init_params(vocab.size(), config.embed_dim, config.units,
                                   derive_seed(config.seed, 0));
  double lr = config.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  ModelParams best_params = params;
  int stall = 0;
  std::vector<TrainLogEntry> log;

  std::vector<std::size_t> scratch;
  for (int step = 1; step <= config.steps; ++step) {
    Rng rng(derive_seed(config.seed, 0xB0000000ULL + static_cast<std::uint64_t>(step)));
    // bucket chosen in proportion to its population
    std::size_t ticket = rng.next_below(train_ex.size());
    std::size_t chosen = groups.size() - 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (ticket < groups[g].size()) {
        chosen = g;
        break;
      }
      ticket -= groups[g].size();
    }
    const auto& group = groups[chosen];
    std::vector<Example> batch;
    if (group.size() <= static_cast<std::size_t>(config.batch_size)) {
      for (const std::size_t idx : group) batch.push_back(train_ex[idx]);
    } else {
      scratch = group;
      rng.shuffle(scratch);
      for (int i = 0; i < config.batch_size; ++i)
        batch.push_back(train_ex[scratch[static_cast<std::size_t>(i)]]);
    }

    const double loss = train_step(params, batch, lr, config.clip_norm);

    if (config.eval_every > 0 && step % config.eval_every == 0) {
      const double val_loss = val_ex.empty() ? loss : batch_loss(params, val_ex);
      log.push_back({step, loss, val_loss, lr});
      if (val_loss < best_val) {
        best_val = val_loss;
        best_params = params;
        stall = 0;
      } else if (++stall >= config.lr_patience) {
        lr /= 2.0;
        stall = 0;
      }
    }
  }

  TrainResult result;
  result.last = {vocab, params, config};
  result.best = {vocab,
                 std::isinf(best_val) ? std::move(params) : std::move(best_params),
                 config};
  result.log = std::move(log);
  return result;
}

}  // namespace mutgen
