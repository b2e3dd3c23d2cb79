#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smr/rng.hpp"
#include "smr/textprep.hpp"

namespace smr {

// Row-major dense matrix of doubles. All training math runs in double
// precision; checkpoints store float32.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using Vector = std::vector<double>;

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// One LSTM layer. W (4h x input), U (4h x hidden), b (4h), with the gate
// blocks stacked in the order [input i, forget f, cell g, output o].
struct LstmLayerParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix W;
  Matrix U;
  Vector b;
};

struct ClassifierModel {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t num_layers = 0;
  Matrix embedding;                     // vocab_size x embed_dim
  std::vector<LstmLayerParams> layers;  // num_layers entries
  Vector head_w;                        // hidden_dim
  double head_b = 0.0;
  std::uint64_t revision = 0;           // bumped on every parameter update
};

// Embedding and recurrent weights are uniform(-k, k) with k = 1/sqrt(fan_in)
// (fan_in = embed_dim for the embedding, input_dim for W, hidden_dim for U).
// Biases start at zero except the forget-gate block, which starts at 1 so a
// fresh cell retains state. The head starts at zero. Sampling order is
// embedding row-major, then per layer W, U, then nothing for b/head, so a
// seed fully determines the model.
inline ClassifierModel init_model(std::size_t vocab_size, std::size_t embed_dim,
                                  std::size_t hidden_dim, std::size_t num_layers,
                                  std::uint64_t seed) {
  if (vocab_size < 2 || embed_dim == 0 || hidden_dim == 0)
    throw std::runtime_error("init_model: dimensions must be positive");
  if (num_layers != 1 && num_layers != 2)
    throw std::runtime_error("init_model: num_layers must be 1 or 2");

  ClassifierModel model;
  model.vocab_size = vocab_size;
  model.embed_dim = embed_dim;
  model.hidden_dim = hidden_dim;
  model.num_layers = num_layers;

  Xoshiro256ss rng(seed);
  const auto fill_uniform = [&rng](std::vector<double>& values, std::size_t fan_in) {
    const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& v : values) v = (2.0 * rng.next_double() - 1.0) * k;
  };

  model.embedding = Matrix(vocab_size, embed_dim);
  fill_uniform(model.embedding.data, embed_dim);

  for (std::size_t l = 0; l < num_layers; ++l) {
    LstmLayerParams layer;
    layer.input_dim = l == 0 ? embed_dim : hidden_dim;
    layer.hidden_dim = hidden_dim;
    layer.W = Matrix(4 * hidden_dim, layer.input_dim);
    layer.U = Matrix(4 * hidden_dim, hidden_dim);
    layer.b = Vector(4 * hidden_dim, 0.0);
    fill_uniform(layer.W.data, layer.input_dim);
    fill_uniform(layer.U.data, layer.hidden_dim);
    for (std::size_t j = hidden_dim; j < 2 * hidden_dim; ++j) layer.b[j] = 1.0;
    model.layers.push_back(std::move(layer));
  }

  model.head_w = Vector(hidden_dim, 0.0);
  model.head_b = 0.0;
  return model;
}

// Cached activations for one time step of one layer.
struct StepCache {
  Vector i, f, g, o;  // gate activations
  Vector c;           // cell state
  Vector tanh_c;
  Vector h;
};

namespace detail {

// z = W x + U h_prev + b, split into gate blocks; i,f,o through the logistic
// sigmoid, g through tanh; c = f (.) c_prev + i (.) g; h = o (.) tanh(c).
inline StepCache lstm_step_cached(const LstmLayerParams& p, const Vector& x,
                                  const Vector& h_prev, const Vector& c_prev) {
  const std::size_t h = p.hidden_dim;
  if (x.size() != p.input_dim || h_prev.size() != h || c_prev.size() != h)
    throw std::runtime_error("lstm_step: dimension mismatch");

  Vector z(p.b);
  for (std::size_t r = 0; r < 4 * h; ++r) {
    double acc = 0.0;
    const double* wrow = &p.W.data[r * p.input_dim];
    for (std::size_t c = 0; c < p.input_dim; ++c) acc += wrow[c] * x[c];
    const double* urow = &p.U.data[r * h];
    for (std::size_t c = 0; c < h; ++c) acc += urow[c] * h_prev[c];
    z[r] += acc;
  }

  StepCache cache;
  cache.i.resize(h);
  cache.f.resize(h);
  cache.g.resize(h);
  cache.o.resize(h);
  cache.c.resize(h);
  cache.tanh_c.resize(h);
  cache.h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    cache.i[j] = sigmoid(z[j]);
    cache.f[j] = sigmoid(z[h + j]);
    cache.g[j] = std::tanh(z[2 * h + j]);
    cache.o[j] = sigmoid(z[3 * h + j]);
    cache.c[j] = cache.f[j] * c_prev[j] + cache.i[j] * cache.g[j];
    cache.tanh_c[j] = std::tanh(cache.c[j]);
    cache.h[j] = cache.o[j] * cache.tanh_c[j];
  }
  return cache;
}

}  // namespace detail

inline std::pair<Vector, Vector> lstm_step(const LstmLayerParams& params,
                                           const Vector& x, const Vector& h_prev,
                                           const Vector& c_prev) {
  auto cache = detail::lstm_step_cached(params, x, h_prev, c_prev);
  return {std::move(cache.h), std::move(cache.c)};
}

struct ForwardTape {
  std::vector<std::uint32_t> ids;              // the true_length real ids
  std::vector<std::vector<StepCache>> layers;  // [layer][step]
  Vector h_last;                               // top-layer final hidden state
  double prob = 0.0;
  std::uint64_t model_revision = 0;
};

// Runs the LSTM stack over the first true_length steps (PAD steps skipped)
// and squashes the top layer's final hidden state through the sigmoid head.
// An all-PAD sequence yields h_last = 0, so prob = sigmoid(head_b).
inline ForwardTape forward(const ClassifierModel& model,
                           const EncodedSequence& seq) {
  ForwardTape tape;
  tape.model_revision = model.revision;
  tape.ids.assign(seq.ids.begin(),
                  seq.ids.begin() + static_cast<std::ptrdiff_t>(seq.true_length));
  for (auto id : tape.ids)
    if (id >= model.vocab_size)
      throw std::runtime_error("forward: token id " + std::to_string(id) +
                               " out of range");

  const std::size_t T = tape.ids.size();
  const std::size_t h = model.hidden_dim;
  tape.layers.resize(model.num_layers);

  Vector x(model.embed_dim);
  for (std::size_t l = 0; l < model.num_layers; ++l) {
    const auto& layer = model.layers[l];
    Vector h_prev(h, 0.0), c_prev(h, 0.0);
    tape.layers[l].reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
      const Vector* input;
      if (l == 0) {
        const double* row = &model.embedding.data[tape.ids[t] * model.embed_dim];
        x.assign(row, row + model.embed_dim);
        input = &x;
      } else {
        input = &tape.layers[l - 1][t].h;
      }
      tape.layers[l].push_back(
          detail::lstm_step_cached(layer, *input, h_prev, c_prev));
      h_prev = tape.layers[l].back().h;
      c_prev = tape.layers[l].back().c;
    }
  }

  tape.h_last = T > 0 ? tape.layers[model.num_layers - 1].back().h
                      : Vector(h, 0.0);
  double logit = model.head_b;
  for (std::size_t j = 0; j < h; ++j) logit += model.head_w[j] * tape.h_last[j];
  tape.prob = sigmoid(logit);
  return tape;
}

inline double bce_loss(double prob, int label) {
  constexpr double eps = 1e-12;
  const double p = std::min(1.0 - eps, std::max(eps, prob));
  return label ? -std::log(p) : -std::log(1.0 - p);
}

struct LayerGradients {
  Matrix W;
  Matrix U;
  Vector b;
};

struct Gradients {
  Matrix embedding;
  std::vector<LayerGradients> layers;
  Vector head_w;
  double head_b = 0.0;
};

inline Gradients zeros_like(const ClassifierModel& model) {
  Gradients g;
  g.embedding = Matrix(model.vocab_size, model.embed_dim);
  for (const auto& layer : model.layers) {
    LayerGradients lg;
    lg.W = Matrix(layer.W.rows, layer.W.cols);
    lg.U = Matrix(layer.U.rows, layer.U.cols);
    lg.b = Vector(layer.b.size(), 0.0);
    g.layers.push_back(std::move(lg));
  }
  g.head_w = Vector(model.head_w.size(), 0.0);
  return g;
}

// Contiguous views over every trainable tensor, in the canonical order
// (embedding, per-layer W/U/b, head_w, head_b). Model, Gradients, and Adam
// buffers all enumerate identically, so index-parallel walks line up.
struct ParamView {
  double* data;
  std::size_t size;
};

inline std::vector<ParamView> param_views(ClassifierModel& m) {
  std::vector<ParamView> views;
  views.push_back({m.embedding.data.data(), m.embedding.data.size()});
  for (auto& layer : m.layers) {
    views.push_back({layer.W.data.data(), layer.W.data.size()});
    views.push_back({layer.U.data.data(), layer.U.data.size()});
    views.push_back({layer.b.data(), layer.b.size()});
  }
  views.push_back({m.head_w.data(), m.head_w.size()});
  views.push_back({&m.head_b, 1});
  return views;
}

inline std::vector<ParamView> param_views(Gradients& g) {
  std::vector<ParamView> views;
  views.push_back({g.embedding.data.data(), g.embedding.data.size()});
  for (auto& layer : g.layers) {
    views.push_back({layer.W.data.data(), layer.W.data.size()});
    views.push_back({layer.U.data.data(), layer.U.data.size()});
    views.push_back({layer.b.data(), layer.b.size()});
  }
  views.push_back({g.head_w.data(), g.head_w.size()});
  views.push_back({&g.head_b, 1});
  return views;
}

inline void accumulate(Gradients& into, const Gradients& from) {
  auto dst = param_views(into);
  auto src = param_views(const_cast<Gradients&>(from));
  if (dst.size() != src.size()) throw std::runtime_error("gradient shape mismatch");
  for (std::size_t v = 0; v < dst.size(); ++v) {
    if (dst[v].size != src[v].size)
      throw std::runtime_error("gradient shape mismatch");
    for (std::size_t k = 0; k < dst[v].size; ++k) dst[v].data[k] += src[v].data[k];
  }
}

inline void scale(Gradients& grads, double factor) {
  for (auto& view : param_views(grads))
    for (std::size_t k = 0; k < view.size; ++k) view.data[k] *= factor;
}

// Backpropagation through time: exact analytic gradients of bce_loss with
// respect to every trainable parameter, accumulated over all real steps.
inline Gradients backward(const ClassifierModel& model, const ForwardTape& tape,
                          int label) {
  if (tape.model_revision != model.revision)
    throw std::runtime_error("backward: stale tape (model changed since forward)");

  Gradients grads = zeros_like(model);
  const std::size_t h = model.hidden_dim;
  const std::size_t T = tape.ids.size();
  const double dlogit = tape.prob - (label ? 1.0 : 0.0);

  grads.head_b = dlogit;
  for (std::size_t j = 0; j < h; ++j)
    grads.head_w[j] = dlogit * tape.h_last[j];
  if (T == 0) return grads;

  // dh arriving from above, per step, for the layer being processed.
  std::vector<Vector> dh_above(T, Vector(h, 0.0));
  for (std::size_t j = 0; j < h; ++j)
    dh_above[T - 1][j] = dlogit * model.head_w[j];

  Vector x(model.embed_dim);
  for (std::size_t l = model.num_layers; l-- > 0;) {
    const auto& layer = model.layers[l];
    auto& lg = grads.layers[l];
    const auto& steps = tape.layers[l];
    const std::size_t in_dim = layer.input_dim;

    std::vector<Vector> dx(T, Vector(in_dim, 0.0));
    Vector dh_next(h, 0.0), dc_next(h, 0.0);
    Vector dz(4 * h);

    for (std::size_t t = T; t-- > 0;) {
      const auto& s = steps[t];
      const Vector* c_prev = t > 0 ? &steps[t - 1].c : nullptr;
      const Vector* h_prev = t > 0 ? &steps[t - 1].h : nullptr;

      for (std::size_t j = 0; j < h; ++j) {
        const double dh = dh_above[t][j] + dh_next[j];
        const double dc = dc_next[j] +
                          dh * s.o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
        const double dgate_i = dc * s.g[j] * s.i[j] * (1.0 - s.i[j]);
        const double cp = c_prev ? (*c_prev)[j] : 0.0;
        const double dgate_f = dc * cp * s.f[j] * (1.0 - s.f[j]);
        const double dgate_g = dc * s.i[j] * (1.0 - s.g[j] * s.g[j]);
        const double dgate_o = dh * s.tanh_c[j] * s.o[j] * (1.0 - s.o[j]);
        dz[j] = dgate_i;
        dz[h + j] = dgate_f;
        dz[2 * h + j] = dgate_g;
        dz[3 * h + j] = dgate_o;
        dc_next[j] = dc * s.f[j];
      }

      const Vector* input;
      if (l == 0) {
        const double* row = &model.embedding.data[tape.ids[t] * model.embed_dim];
        x.assign(row, row + model.embed_dim);
        input = &x;
      } else {
        input = &tape.layers[l - 1][t].h;
      }

      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      for (std::size_t r = 0; r < 4 * h; ++r) {
        const double dzr = dz[r];
        lg.b[r] += dzr;
        double* dwrow = &lg.W.data[r * in_dim];
        const double* wrow = &layer.W.data[r * in_dim];
        for (std::size_t c = 0; c < in_dim; ++c) {
          dwrow[c] += dzr * (*input)[c];
          dx[t][c] += wrow[c] * dzr;
        }
        if (t > 0) {
          double* durow = &lg.U.data[r * h];
          const double* urow = &layer.U.data[r * h];
          for (std::size_t c = 0; c < h; ++c) {
            durow[c] += dzr * (*h_prev)[c];
            dh_next[c] += urow[c] * dzr;
          }
        }
      }
    }

    if (l == 0) {
      for (std::size_t t = 0; t < T; ++t) {
        double* row = &grads.embedding.data[tape.ids[t] * model.embed_dim];
        for (std::size_t c = 0; c < model.embed_dim; ++c) row[c] += dx[t][c];
      }
    } else {
      dh_above = std::move(dx);
    }
  }
  return grads;
}

namespace detail {

// Extended-precision re-evaluation of bce(forward(.)) for the
// finite-difference oracle. The differenced losses cancel to ~1e-12 in plain
// double, which swamps near-zero gradients at epsilon = 1e-5; running the
// probe evaluations in long double keeps the oracle noise well below the
// 1e-4 verification bound. Straight-line code, independent of forward().
inline long double loss_extended(const ClassifierModel& m,
                                 const std::vector<std::uint32_t>& ids,
                                 int label) {
  using LD = long double;
  const std::size_t h = m.hidden_dim;
  const auto sigmoid_ld = [](LD x) {
    if (x >= 0) return LD(1) / (LD(1) + std::exp(-x));
    const LD e = std::exp(x);
    return e / (LD(1) + e);
  };

  std::vector<std::vector<LD>> inputs(ids.size());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    inputs[t].resize(m.embed_dim);
    for (std::size_t c = 0; c < m.embed_dim; ++c)
      inputs[t][c] = m.embedding(ids[t], c);
  }

  std::vector<LD> h_last(h, 0);
  for (const auto& layer : m.layers) {
    std::vector<LD> hs(h, 0), cs(h, 0);
    std::vector<std::vector<LD>> outputs(inputs.size());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      std::vector<LD> z(4 * h);
      for (std::size_t r = 0; r < 4 * h; ++r) {
        LD acc = layer.b[r];
        for (std::size_t c = 0; c < layer.input_dim; ++c)
          acc += static_cast<LD>(layer.W.data[r * layer.input_dim + c]) *
                 inputs[t][c];
        for (std::size_t c = 0; c < h; ++c)
          acc += static_cast<LD>(layer.U.data[r * h + c]) * hs[c];
        z[r] = acc;
      }
      std::vector<LD> next_h(h), next_c(h);
      for (std::size_t j = 0; j < h; ++j) {
        const LD i = sigmoid_ld(z[j]);
        const LD f = sigmoid_ld(z[h + j]);
        const LD g = std::tanh(z[2 * h + j]);
        const LD o = sigmoid_ld(z[3 * h + j]);
        next_c[j] = f * cs[j] + i * g;
        next_h[j] = o * std::tanh(next_c[j]);
      }
      hs = std::move(next_h);
      cs = std::move(next_c);
      outputs[t] = hs;
    }
    inputs = std::move(outputs);
    if (!inputs.empty()) h_last = inputs.back();
  }

  LD logit = m.head_b;
  for (std::size_t j = 0; j < h; ++j)
    logit += static_cast<LD>(m.head_w[j]) * h_last[j];
  const LD p = std::min(LD(1) - LD(1e-12),
                        std::max(LD(1e-12), sigmoid_ld(logit)));
  return label ? -std::log(p) : -std::log(LD(1) - p);
}

}  // namespace detail

// Central finite differences over every parameter; returns the worst
// relative error against the analytic gradient. The numeric side is the
// oracle and runs in extended precision (see loss_extended).
inline double grad_check(const ClassifierModel& model, const EncodedSequence& seq,
                         int label, double epsilon) {
  if (!(epsilon > 0.0)) throw std::runtime_error("grad_check: epsilon must be > 0");

  const Gradients analytic = backward(model, forward(model, seq), label);
  const std::vector<std::uint32_t> ids(
      seq.ids.begin(), seq.ids.begin() + static_cast<std::ptrdiff_t>(seq.true_length));

  ClassifierModel probe = model;
  auto probe_views = param_views(probe);
  auto grad_views = param_views(const_cast<Gradients&>(analytic));

  double max_rel_error = 0.0;
  for (std::size_t v = 0; v < probe_views.size(); ++v) {
    for (std::size_t k = 0; k < probe_views[v].size; ++k) {
      double& theta = probe_views[v].data[k];
      const double saved = theta;
      theta = saved + epsilon;
      const long double loss_plus = detail::loss_extended(probe, ids, label);
      theta = saved - epsilon;
      const long double loss_minus = detail::loss_extended(probe, ids, label);
      theta = saved;
      const double numeric = static_cast<double>(
          (loss_plus - loss_minus) / (2.0L * static_cast<long double>(epsilon)));
      const double a = grad_views[v].data[k];
      const double rel = std::fabs(a - numeric) /
                         std::max(1e-8, std::fabs(a) + std::fabs(numeric));
      max_rel_error = std::max(max_rel_error, rel);
    }
  }
  return max_rel_error;
}

struct OptimizerState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;
  Gradients m;
  Gradients v;

  static OptimizerState create(const ClassifierModel& model, double lr = 1e-3,
                               double beta1 = 0.9, double beta2 = 0.999,
                               double eps = 1e-8) {
    OptimizerState state;
    state.lr = lr;
    state.beta1 = beta1;
    state.beta2 = beta2;
    state.eps = eps;
    state.m = zeros_like(model);
    state.v = zeros_like(model);
    return state;
  }
};

// Standard Adam with bias correction; theta -= lr * m_hat / (sqrt(v_hat) + eps).
inline void adam_step(ClassifierModel& model, const Gradients& grads,
                      OptimizerState& state) {
  auto params = param_views(model);
  auto g = param_views(const_cast<Gradients&>(grads));
  auto m = param_views(state.m);
  auto v = param_views(state.v);
  if (params.size() != g.size())
    throw std::runtime_error("adam_step: gradient shape mismatch");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t view = 0; view < params.size(); ++view) {
    if (params[view].size != g[view].size)
      throw std::runtime_error("adam_step: gradient shape mismatch");
    for (std::size_t k = 0; k < params[view].size; ++k) {
      double& mk = m[view].data[k];
      double& vk = v[view].data[k];
      const double gk = g[view].data[k];
      mk = state.beta1 * mk + (1.0 - state.beta1) * gk;
      vk = state.beta2 * vk + (1.0 - state.beta2) * gk * gk;
      const double m_hat = mk / bc1;
      const double v_hat = vk / bc2;
      params[view].data[k] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
  model.revision += 1;
}

struct Checkpoint {
  ClassifierModel model;
  Vocab vocab;
};

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t value) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, 4);
}

inline std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw std::runtime_error("truncated checkpoint");
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) value |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return value;
}

inline void put_f32(std::ostream& out, double value) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(value)));
}

inline double get_f32(std::istream& in) {
  return static_cast<double>(std::bit_cast<float>(get_u32(in)));
}

}  // namespace detail

// Checkpoint layout (docs/checkpoint.md): magic "SMIR", version byte 1, then
// little-endian u32 vocab_size/embed_dim/hidden_dim/num_layers, then f32
// tensors row-major in canonical order, then the real-token list (u32 count,
// then u32 byte length + UTF-8 bytes per token, ids 2 upward).
inline void save_checkpoint(const ClassifierModel& model, const Vocab& vocab,
                            std::ostream& out) {
  if (vocab.size() != model.vocab_size)
    throw std::runtime_error("save_checkpoint: vocab size does not match model");
  out.write("SMIR", 4);
  out.put(static_cast<char>(1));
  detail::put_u32(out, static_cast<std::uint32_t>(model.vocab_size));
  detail::put_u32(out, static_cast<std::uint32_t>(model.embed_dim));
  detail::put_u32(out, static_cast<std::uint32_t>(model.hidden_dim));
  detail::put_u32(out, static_cast<std::uint32_t>(model.num_layers));
  auto views = param_views(const_cast<ClassifierModel&>(model));
  for (const auto& view : views)
    for (std::size_t k = 0; k < view.size; ++k) detail::put_f32(out, view.data[k]);
  detail::put_u32(out, vocab.size() - 2);
  for (std::uint32_t id = 2; id < vocab.size(); ++id) {
    const std::string& token = vocab.token_of(id);
    detail::put_u32(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
  }
}

inline void save_checkpoint(const ClassifierModel& model, const Vocab& vocab,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_checkpoint(model, vocab, out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline Checkpoint load_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SMIR", 4) != 0)
    throw std::runtime_error("bad magic: not a checkpoint file");
  const int version = in.get();
  if (version != 1)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));

  const std::uint32_t vocab_size = detail::get_u32(in);
  const std::uint32_t embed_dim = detail::get_u32(in);
  const std::uint32_t hidden_dim = detail::get_u32(in);
  const std::uint32_t num_layers = detail::get_u32(in);
  if (vocab_size < 2 || embed_dim == 0 || hidden_dim == 0 ||
      (num_layers != 1 && num_layers != 2))
    throw std::runtime_error("corrupt checkpoint header");

  Checkpoint checkpoint;
  auto& model = checkpoint.model;
  model.vocab_size = vocab_size;
  model.embed_dim = embed_dim;
  model.hidden_dim = hidden_dim;
  model.num_layers = num_layers;
  model.embedding = Matrix(vocab_size, embed_dim);
  for (std::uint32_t l = 0; l < num_layers; ++l) {
    LstmLayerParams layer;
    layer.input_dim = l == 0 ? embed_dim : hidden_dim;
    layer.hidden_dim = hidden_dim;
    layer.W = Matrix(4 * hidden_dim, layer.input_dim);
    layer.U = Matrix(4 * hidden_dim, hidden_dim);
    layer.b = Vector(4 * hidden_dim, 0.0);
    model.layers.push_back(std::move(layer));
  }
  model.head_w = Vector(hidden_dim, 0.0);
  for (auto& view : param_views(model))
    for (std::size_t k = 0; k < view.size; ++k) view.data[k] = detail::get_f32(in);

  const std::uint32_t token_count = detail::get_u32(in);
  if (token_count != vocab_size - 2)
    throw std::runtime_error("corrupt checkpoint: token count mismatch");
  for (std::uint32_t k = 0; k < token_count; ++k) {
    const std::uint32_t len = detail::get_u32(in);
    std::string token(len, '\0');
    if (!in.read(token.data(), len))
      throw std::runtime_error("truncated checkpoint");
    checkpoint.vocab.add(std::move(token));
  }
  return checkpoint;
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return load_checkpoint(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace smr
