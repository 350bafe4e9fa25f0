#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fedstrat {

/// Dense labeled classification data. Features are stored row-major,
/// one row of `num_features` values per sample.
struct Dataset {
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {features.data() + i * num_features, num_features};
  }

  /// Number of samples carrying each label.
  std::vector<std::size_t> class_counts() const;
};

/// A subset of a dataset addressed by sample indices. Non-owning.
struct DatasetView {
  const Dataset* dataset = nullptr;
  std::span<const std::size_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

struct PartitionConfig {
  double beta = 0.5;
  std::size_t num_clients = 20;
  std::uint64_t seed = 0;
};

/// One index list per client. Lists are disjoint, sorted ascending, and
/// jointly cover the partitioned dataset.
struct Partition {
  std::vector<std::vector<std::size_t>> assignments;
};

/// Gaussian-blob classification data. Class means sit at pairwise distance
/// `class_separation` (exactly, whenever num_classes <= num_features; in
/// expectation otherwise) and samples have identity covariance. Samples are
/// ordered class by class.
///
/// Throws std::invalid_argument on non-positive arguments.
Dataset generate_synthetic(int num_classes, int num_features,
                           int samples_per_class, double class_separation,
                           std::uint64_t seed);

/// Splits `ds` across clients with per-class proportions drawn from
/// Dirichlet(beta * 1_N). Counts use largest-remainder rounding; a client
/// left empty receives one sample from the currently largest client.
///
/// Throws std::invalid_argument if beta <= 0, num_clients == 0, or the
/// dataset has fewer samples than clients.
Partition dirichlet_partition(const Dataset& ds, const PartitionConfig& cfg);

/// Deterministic stratified split. The second dataset holds
/// round(fraction * size) samples with per-class counts allotted by largest
/// remainder. Relative sample order is preserved in both halves.
///
/// Throws std::invalid_argument if fraction is outside (0, 1) or a class
/// present in `ds` would be missing from either half.
std::pair<Dataset, Dataset> holdout_split(const Dataset& ds, double fraction,
                                          std::uint64_t seed);

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

/// Shannon entropy (nats) of the label histogram of the given samples.
double label_entropy(const Dataset& ds, std::span<const std::size_t> indices);

}  // namespace fedstrat
