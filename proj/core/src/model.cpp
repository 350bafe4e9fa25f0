#include "fedstrat/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedstrat/rng.hpp"

namespace fedstrat {
namespace {

// Numerically stable in-place softmax; returns log-sum-exp.
double softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return m + std::log(sum);
}

// y[r] = W[r,:] . x + b[r]
void affine(const double* w, const double* b, std::span<const double> x,
            std::size_t rows, std::vector<double>& y) {
  y.assign(rows, 0.0);
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = b[r];
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

struct Activations {
  std::vector<double> hidden;  // post-ReLU, MLP only
  std::vector<double> logits;
};

void forward(const ModelParams& p, std::span<const double> x, Activations& act) {
  const auto& s = p.shape;
  const double* base = p.flat.data();
  if (s.hidden == 0) {
    affine(base, base + s.num_classes * s.num_features, x, s.num_classes, act.logits);
    return;
  }
  const double* w1 = base;
  const double* b1 = w1 + s.hidden * s.num_features;
  const double* w2 = b1 + s.hidden;
  const double* b2 = w2 + s.num_classes * s.hidden;
  affine(w1, b1, x, s.hidden, act.hidden);
  for (double& h : act.hidden) h = std::max(h, 0.0);
  affine(w2, b2, act.hidden, s.num_classes, act.logits);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::size_t ModelShape::param_count() const noexcept {
  if (hidden == 0) return num_features * num_classes + num_classes;
  return num_features * hidden + hidden + hidden * num_classes + num_classes;
}

ModelParams init_model(int num_features, int num_classes, std::optional<int> hidden,
                       std::uint64_t seed) {
  if (num_features <= 0 || num_classes <= 0 || (hidden && *hidden <= 0))
    throw std::invalid_argument("model dimensions must be positive");

  ModelParams p;
  p.shape = {static_cast<std::size_t>(num_features),
             static_cast<std::size_t>(num_classes),
             hidden ? static_cast<std::size_t>(*hidden) : 0};
  p.flat.assign(p.shape.param_count(), 0.0);

  Rng rng(seed);
  auto fill = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < count; ++i) p.flat[offset + i] = u(rng);
  };

  const auto& s = p.shape;
  if (s.hidden == 0) {
    fill(0, s.param_count(), s.num_features);
  } else {
    const std::size_t layer1 = s.hidden * s.num_features + s.hidden;
    fill(0, layer1, s.num_features);
    fill(layer1, s.param_count() - layer1, s.hidden);
  }
  return p;
}

LossGradient loss_and_gradient(const ModelParams& params, DatasetView batch) {
  const auto& s = params.shape;
  LossGradient out;
  out.gradient.assign(params.flat.size(), 0.0);
  if (batch.empty()) return out;

  Activations act;
  std::vector<double> dlogits(s.num_classes);
  std::vector<double> dhidden(s.hidden);
  double* g = out.gradient.data();

  for (std::size_t idx : batch.indices) {
    const auto x = batch.dataset->row(idx);
    const auto y = static_cast<std::size_t>(batch.dataset->labels[idx]);
    forward(params, x, act);
    const double z_y = act.logits[y];
    const double lse = softmax_inplace(act.logits);
    out.loss += lse - z_y;

    for (std::size_t k = 0; k < s.num_classes; ++k)
      dlogits[k] = act.logits[k] - (k == y ? 1.0 : 0.0);

    if (s.hidden == 0) {
      double* gw = g;
      double* gb = g + s.num_classes * s.num_features;
      for (std::size_t k = 0; k < s.num_classes; ++k) {
        for (std::size_t j = 0; j < s.num_features; ++j)
          gw[k * s.num_features + j] += dlogits[k] * x[j];
        gb[k] += dlogits[k];
      }
      continue;
    }

    const double* w2 = params.flat.data() + s.hidden * s.num_features + s.hidden;
    double* gw1 = g;
    double* gb1 = gw1 + s.hidden * s.num_features;
    double* gw2 = gb1 + s.hidden;
    double* gb2 = gw2 + s.num_classes * s.hidden;

    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (std::size_t k = 0; k < s.num_classes; ++k) {
      for (std::size_t h = 0; h < s.hidden; ++h) {
        gw2[k * s.hidden + h] += dlogits[k] * act.hidden[h];
        dhidden[h] += dlogits[k] * w2[k * s.hidden + h];
      }
      gb2[k] += dlogits[k];
    }
    for (std::size_t h = 0; h < s.hidden; ++h) {
      if (act.hidden[h] <= 0.0) continue;  // ReLU gate
      for (std::size_t j = 0; j < s.num_features; ++j)
        gw1[h * s.num_features + j] += dhidden[h] * x[j];
      gb1[h] += dhidden[h];
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  for (double& v : out.gradient) v *= inv;
  return out;
}

std::vector<double> logits(const ModelParams& params, std::span<const double> x) {
  Activations act;
  forward(params, x, act);
  return act.logits;
}

int predict(const ModelParams& params, std::span<const double> x) {
  const auto z = logits(params, x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

UpdateVector local_train(const ModelParams& start, DatasetView shard,
                         const TrainConfig& cfg, std::uint64_t seed) {
  if (shard.empty()) throw std::invalid_argument("local_train: empty shard");
  if (cfg.batch_size == 0) throw std::invalid_argument("local_train: batch_size == 0");

  ModelParams w = start;
  std::vector<double> velocity(w.flat.size(), 0.0);
  std::vector<std::size_t> order(shard.indices.begin(), shard.indices.end());
  Rng rng(seed);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      const DatasetView batch{shard.dataset,
                              std::span<const std::size_t>(order).subspan(begin, end - begin)};
      const auto lg = loss_and_gradient(w, batch);
      for (std::size_t i = 0; i < w.flat.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] + lg.gradient[i];
        w.flat[i] -= cfg.learning_rate * velocity[i];
      }
      if (!all_finite(w.flat))
        throw DivergenceError("local training diverged (non-finite parameters) in epoch " +
                              std::to_string(epoch));
    }
  }

  UpdateVector u;
  u.delta.resize(w.flat.size());
  for (std::size_t i = 0; i < w.flat.size(); ++i) u.delta[i] = w.flat[i] - start.flat[i];
  return u;
}

double evaluate(const ModelParams& params, const Dataset& ds) {
  if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (predict(params, ds.row(i)) == ds.labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

void apply_update(ModelParams& params, const UpdateVector& update) {
  if (update.size() != params.flat.size())
    throw std::invalid_argument("apply_update: length mismatch");
  for (std::size_t i = 0; i < params.flat.size(); ++i) params.flat[i] += update.delta[i];
}

}  // namespace fedstrat
