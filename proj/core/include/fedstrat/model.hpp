#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedstrat/data.hpp"

namespace fedstrat {

/// Architecture of the classifier. `hidden == 0` selects multinomial
/// logistic regression; otherwise a one-hidden-layer ReLU MLP.
struct ModelShape {
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::size_t hidden = 0;

  std::size_t param_count() const noexcept;
  bool operator==(const ModelShape&) const = default;
};

/// Flattened model parameters.
///
/// Layout, logistic: W (classes x features, row-major), then b (classes).
/// Layout, MLP: W1 (hidden x features), b1 (hidden), W2 (classes x hidden),
/// b2 (classes).
struct ModelParams {
  ModelShape shape;
  std::vector<double> flat;
};

struct TrainConfig {
  double learning_rate = 0.001;
  double momentum = 0.9;
  int epochs = 1;
  std::size_t batch_size = 32;
};

/// A client's parameter delta for one round (trained minus start).
struct UpdateVector {
  std::vector<double> delta;

  std::size_t size() const noexcept { return delta.size(); }
  bool operator==(const UpdateVector&) const = default;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Small deterministic random initialization (uniform in +-1/sqrt(fan_in)).
ModelParams init_model(int num_features, int num_classes, std::optional<int> hidden,
                       std::uint64_t seed);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// Mean softmax cross-entropy over the samples of `batch`, with its analytic
/// gradient in the flat parameter layout.
LossGradient loss_and_gradient(const ModelParams& params, DatasetView batch);

/// Class logits for a single feature row.
std::vector<double> logits(const ModelParams& params, std::span<const double> x);

/// Arg-max class; ties go to the lowest class index.
int predict(const ModelParams& params, std::span<const double> x);

/// Runs `cfg.epochs` epochs of mini-batch SGD with momentum (velocity
/// starts at zero) over `shard`, shuffling batch order from `seed`.
/// Throws DivergenceError when a parameter becomes NaN or infinite.
UpdateVector local_train(const ModelParams& start, DatasetView shard,
                         const TrainConfig& cfg, std::uint64_t seed);

/// Top-1 accuracy in [0, 1]. Throws std::invalid_argument on an empty set.
double evaluate(const ModelParams& params, const Dataset& ds);

/// params += update.
void apply_update(ModelParams& params, const UpdateVector& update);

}  // namespace fedstrat
