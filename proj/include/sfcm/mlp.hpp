// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sfcm/errors.hpp"
#include "sfcm/eval.hpp"
#include "sfcm/matrix.hpp"
#include "sfcm/rng.hpp"

namespace sfcm::mlp {

inline constexpr int kTasks = 4;  // single point, Ewald, lattice, MBD

// Numerically stable logistic 1 / (1 + e^-x); branches on sign so |x| up
// to several hundred neither overflows nor underflows to garbage.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct Config {
  std::vector<int> hidden_sizes = {32};
  double learn_rate = 1e-3;
  int batch_size = 32;
  int epochs = 200;
  std::uint64_t seed = 0;

  void validate() const {
    if (hidden_sizes.empty() || hidden_sizes.size() > 8)
      throw InvalidConfig("between 1 and 8 hidden layers required");
    for (int h : hidden_sizes)
      if (h < 1) throw InvalidConfig("hidden layer sizes must be positive");
    if (learn_rate < 0.0) throw InvalidConfig("learn rate must be >= 0");
    if (batch_size < 1) throw InvalidConfig("batch size must be positive");
    if (epochs < 0) throw InvalidConfig("epochs must be >= 0");
  }
};

// Table-style presets for the three representations: k, architecture,
// learn rate, batch size.
struct Preset {
  int k;
  Config config;
};

inline Preset preset(const std::string& name) {
  if (name == "sfc-m1") return {7, {{72, 38, 468}, 3.74e-4, 37, 200, 0}};
  if (name == "sfc-m2") return {10, {{41, 62, 15}, 7.11e-4, 52, 200, 0}};
  if (name == "sfc-m3") return {17, {{79, 33, 90}, 1.03e-5, 72, 200, 0}};
  throw InvalidConfig("unknown preset '" + name +
                      "' (expected sfc-m1|sfc-m2|sfc-m3)");
}

// Layered weights plus the normalization statistics the model was trained
// with. Hidden activations are logistic; the output layer is affine so
// z-scored (signed) targets are representable.
struct Model {
  std::vector<int> layer_sizes;       // input, hidden..., kTasks
  std::vector<Matrix> weights;        // weights[l]: sizes[l+1] x sizes[l]
  std::vector<std::vector<double>> biases;
  std::vector<double> input_mean, input_std;   // per feature
  std::array<double, kTasks> target_mean{}, target_std{};

  int input_dim() const { return layer_sizes.front(); }
};

// Glorot-uniform weights in [-s, s] with s = sqrt(6 / (fan_in + fan_out)),
// zero biases; deterministic for a given cfg.seed.
inline Model init(const Config& cfg, int input_dim) {
  cfg.validate();
  if (input_dim < 1) throw InvalidConfig("input dimension must be >= 1");
  Model m;
  m.layer_sizes.push_back(input_dim);
  for (int h : cfg.hidden_sizes) m.layer_sizes.push_back(h);
  m.layer_sizes.push_back(kTasks);

  Rng rng(sub_seed(cfg.seed, "init"));
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const auto fan_in = static_cast<std::size_t>(m.layer_sizes[l]);
    const auto fan_out = static_cast<std::size_t>(m.layer_sizes[l + 1]);
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_out, fan_in);
    for (std::size_t i = 0; i < fan_out; ++i)
      for (std::size_t j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-s, s);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(fan_out, 0.0);
  }
  m.input_mean.assign(static_cast<std::size_t>(input_dim), 0.0);
  m.input_std.assign(static_cast<std::size_t>(input_dim), 1.0);
  m.target_mean.fill(0.0);
  m.target_std.fill(1.0);
  return m;
}

// Forward pass on an already-normalized feature vector; returns the four
// normalized task outputs.
inline std::array<double, kTasks> forward(const Model& m,
                                          const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.input_dim())
    throw DimensionMismatch("input of size " + std::to_string(x.size()) +
                            " for a model expecting " +
                            std::to_string(m.input_dim()));
  std::vector<double> act = x;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const Matrix& w = m.weights[l];
    std::vector<double> next(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
      double z = m.biases[l][i];
      const double* wr = w.row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) z += wr[j] * act[j];
      next[i] = (l + 1 < m.weights.size()) ? logistic(z) : z;
    }
    act = std::move(next);
  }
  std::array<double, kTasks> out{};
  std::copy_n(act.begin(), kTasks, out.begin());
  return out;
}

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  double loss = 0.0;
};

// Mean-squared-error loss over a (normalized) batch, averaged over the
// four tasks, with exact backpropagation gradients.
inline Gradients compute_gradients(const Model& m, const Matrix& x,
                                   const Matrix& y,
                                   const std::vector<std::size_t>& rows) {
  Gradients g;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    g.weights.emplace_back(m.weights[l].rows(), m.weights[l].cols());
    g.biases.emplace_back(m.biases[l].size(), 0.0);
  }
  const std::size_t layers = m.weights.size();
  const double denom = static_cast<double>(rows.size()) * kTasks;

  std::vector<std::vector<double>> act(layers + 1);
  for (const std::size_t r : rows) {
    act[0].assign(x.row(r), x.row(r) + x.cols());
    for (std::size_t l = 0; l < layers; ++l) {
      const Matrix& w = m.weights[l];
      act[l + 1].assign(w.rows(), 0.0);
      for (std::size_t i = 0; i < w.rows(); ++i) {
        double z = m.biases[l][i];
        const double* wr = w.row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) z += wr[j] * act[l][j];
        act[l + 1][i] = (l + 1 < layers) ? logistic(z) : z;
      }
    }
    std::vector<double> delta(kTasks);
    for (int t = 0; t < kTasks; ++t) {
      const double diff = act[layers][static_cast<std::size_t>(t)] - y(r, static_cast<std::size_t>(t));
      g.loss += diff * diff / denom;
      delta[static_cast<std::size_t>(t)] = 2.0 * diff / denom;
    }
    for (std::size_t l = layers; l-- > 0;) {
      const Matrix& w = m.weights[l];
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const double d = delta[i];
        g.biases[l][i] += d;
        double* gr = g.weights[l].row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) gr[j] += d * act[l][j];
      }
      if (l == 0) break;
      std::vector<double> prev(w.cols(), 0.0);
      for (std::size_t j = 0; j < w.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) s += w(i, j) * delta[i];
        const double a = act[l][j];
        prev[j] = s * a * (1.0 - a);  // logistic derivative
      }
      delta = std::move(prev);
    }
  }
  return g;
}

struct TrainReport {
  std::vector<double> epoch_loss;
  double final_loss = 0.0;
};

namespace detail {

inline void column_stats(const Matrix& m, std::vector<double>& mean,
                         std::vector<double>& std) {
  mean.assign(m.cols(), 0.0);
  std.assign(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += m(i, j);
  for (auto& v : mean) v /= static_cast<double>(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double d = m(i, j) - mean[j];
      std[j] += d * d;
    }
  for (auto& v : std) {
    v = std::sqrt(v / static_cast<double>(m.rows()));
    if (v < 1e-12) v = 1.0;  // constant columns pass through unscaled
  }
}

}  // namespace detail

// Mini-batch gradient descent on z-scored features and targets. The
// normalization statistics are computed here, from the training set only,
// and stored on the model. Each epoch reshuffles with a seeded RNG and
// keeps the final short batch.
inline std::pair<Model, TrainReport> train(Model m, const Matrix& x_raw,
                                           const Matrix& y_raw,
                                           const Config& cfg) {
  cfg.validate();
  if (x_raw.rows() != y_raw.rows())
    throw DimensionMismatch("features and targets row counts differ");
  if (x_raw.rows() < static_cast<std::size_t>(cfg.batch_size))
    throw DimensionMismatch("batch size exceeds training-set size");
  if (static_cast<int>(x_raw.cols()) != m.input_dim())
    throw DimensionMismatch("feature width does not match model input");
  if (y_raw.cols() != kTasks)
    throw DimensionMismatch("targets must have exactly 4 columns");

  std::vector<double> ymean, ystd;
  detail::column_stats(x_raw, m.input_mean, m.input_std);
  detail::column_stats(y_raw, ymean, ystd);
  for (int t = 0; t < kTasks; ++t) {
    m.target_mean[static_cast<std::size_t>(t)] = ymean[static_cast<std::size_t>(t)];
    m.target_std[static_cast<std::size_t>(t)] = ystd[static_cast<std::size_t>(t)];
  }

  const std::size_t n = x_raw.rows();
  Matrix x(n, x_raw.cols()), y(n, kTasks);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x_raw.cols(); ++j)
      x(i, j) = (x_raw(i, j) - m.input_mean[j]) / m.input_std[j];
    for (std::size_t t = 0; t < kTasks; ++t)
      y(i, t) = (y_raw(i, t) - m.target_mean[t]) / m.target_std[t];
  }

  TrainReport report;
  Rng shuffle_rng(sub_seed(cfg.seed, "shuffle"));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Gradients g = compute_gradients(m, x, y, batch);
      if (!std::isfinite(g.loss))
        throw NonFiniteLoss("at epoch " + std::to_string(epoch));
      epoch_loss += g.loss * static_cast<double>(batch.size());
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (std::size_t i = 0; i < m.weights[l].data().size(); ++i)
          m.weights[l].data()[i] -= cfg.learn_rate * g.weights[l].data()[i];
        for (std::size_t i = 0; i < m.biases[l].size(); ++i)
          m.biases[l][i] -= cfg.learn_rate * g.biases[l][i];
      }
    }
    report.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  report.final_loss = report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back();
  return {std::move(m), std::move(report)};
}

// Prediction in original energy units: normalize the raw features with
// the stored statistics, run the network, de-normalize per task.
inline std::array<double, kTasks> predict(const Model& m,
                                          const std::vector<double>& x_raw) {
  if (static_cast<int>(x_raw.size()) != m.input_dim())
    throw DimensionMismatch("input of size " + std::to_string(x_raw.size()) +
                            " for a model expecting " +
                            std::to_string(m.input_dim()));
  std::vector<double> x(x_raw.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    x[j] = (x_raw[j] - m.input_mean[j]) / m.input_std[j];
  auto out = forward(m, x);
  for (std::size_t t = 0; t < kTasks; ++t)
    out[t] = out[t] * m.target_std[t] + m.target_mean[t];
  return out;
}

inline Matrix predict_all(const Model& m, const Matrix& x_raw) {
  Matrix out(x_raw.rows(), kTasks);
  for (std::size_t i = 0; i < x_raw.rows(); ++i) {
    const auto p = predict(m, std::vector<double>(x_raw.row(i), x_raw.row(i) + x_raw.cols()));
    for (std::size_t t = 0; t < kTasks; ++t) out(i, t) = p[t];
  }
  return out;
}

// Plumbing-grade hyperparameter search: uniform samples over the space
// (log-uniform learn rate), scored by validation AFE on a held-out 20%
// split of the supplied training data. Deterministic for a given seed.
struct SearchSpace {
  int min_layers = 1, max_layers = 3;
  int min_units = 8, max_units = 96;
  double min_learn_rate = 1e-4, max_learn_rate = 3e-2;
  int min_batch = 16, max_batch = 64;
  int epochs = 150;
};

inline Config random_search(const SearchSpace& space, const Matrix& x_raw,
                            const Matrix& y_raw, int budget,
                            std::uint64_t seed) {
  if (budget < 1) throw InvalidConfig("random_search budget must be >= 1");
  const std::size_t n = x_raw.rows();
  if (n < 5) throw TooFewSamples("random_search needs at least 5 samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(sub_seed(seed, "split"));
  split_rng.shuffle(order);
  const std::size_t n_val = std::max<std::size_t>(1, n / 5);
  const std::size_t n_train = n - n_val;

  Matrix x_train(n_train, x_raw.cols()), y_train(n_train, kTasks);
  Matrix x_val(n_val, x_raw.cols()), y_val(n_val, kTasks);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix& xm = i < n_train ? x_train : x_val;
    Matrix& ym = i < n_train ? y_train : y_val;
    const std::size_t r = i < n_train ? i : i - n_train;
    for (std::size_t j = 0; j < x_raw.cols(); ++j) xm(r, j) = x_raw(order[i], j);
    for (std::size_t t = 0; t < kTasks; ++t) ym(r, t) = y_raw(order[i], t);
  }

  Rng rng(sub_seed(seed, "search"));
  Config best;
  double best_score = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < budget; ++trial) {
    Config cfg;
    cfg.hidden_sizes.clear();
    const auto layers = static_cast<int>(rng.uniform_int(space.min_layers, space.max_layers));
    for (int l = 0; l < layers; ++l)
      cfg.hidden_sizes.push_back(static_cast<int>(rng.uniform_int(space.min_units, space.max_units)));
    cfg.learn_rate = rng.log_uniform(space.min_learn_rate, space.max_learn_rate);
    cfg.batch_size = static_cast<int>(rng.uniform_int(
        space.min_batch, std::max(space.min_batch, std::min<int>(space.max_batch, static_cast<int>(n_train)))));
    cfg.batch_size = std::min<int>(cfg.batch_size, static_cast<int>(n_train));
    cfg.epochs = space.epochs;
    cfg.seed = sub_seed(seed, "trial", static_cast<std::uint64_t>(trial));

    const auto [model, report] =
        train(init(cfg, static_cast<int>(x_raw.cols())), x_train, y_train, cfg);
    const Matrix pred = predict_all(model, x_val);
    double score = 0.0;
    for (std::size_t t = 0; t < kTasks; ++t) {
      std::vector<double> p(n_val), c(n_val);
      for (std::size_t i = 0; i < n_val; ++i) {
        p[i] = pred(i, t);
        c[i] = y_val(i, t);
      }
      score += eval::afe(p, c) / kTasks;
    }
    if (score < best_score) {
      best_score = score;
      best = cfg;
    }
  }
  return best;
}

}  // namespace sfcm::mlp
