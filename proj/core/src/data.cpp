#include "fedstrat/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedstrat/rng.hpp"

namespace fedstrat {
namespace {

// Splits `total` into integer parts proportional to `weights` (which need
// not be normalized). Floors first, then hands the leftover units to the
// largest fractional parts; ties go to the lower index.
std::vector<std::size_t> largest_remainder(std::span<const double> weights,
                                           std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> counts(weights.size(), 0);
  if (weights.empty() || sum <= 0.0) return counts;

  std::vector<double> frac(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    const double fl = std::floor(quota);
    counts[i] = static_cast<std::size_t>(fl);
    frac[i] = quota - fl;
    assigned += counts[i];
  }
  // Floating error can push the floored sum one over in degenerate cases.
  while (assigned > total) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t j = 0; assigned < total; j = (j + 1) % order.size()) {
    ++counts[order[j]];
    ++assigned;
  }
  return counts;
}

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i)
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  return by_class;
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

Dataset generate_synthetic(int num_classes, int num_features,
                           int samples_per_class, double class_separation,
                           std::uint64_t seed) {
  if (num_classes <= 0) throw std::invalid_argument("num_classes must be positive");
  if (num_features <= 0) throw std::invalid_argument("num_features must be positive");
  if (samples_per_class <= 0)
    throw std::invalid_argument("samples_per_class must be positive");
  if (!(class_separation > 0.0))
    throw std::invalid_argument("class_separation must be positive");

  const auto k = static_cast<std::size_t>(num_classes);
  const auto d = static_cast<std::size_t>(num_features);
  const auto n = static_cast<std::size_t>(samples_per_class);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Means lie on a sphere of radius sep / sqrt(2): orthogonal axes give a
  // pairwise distance of exactly `class_separation`.
  const double radius = class_separation / std::sqrt(2.0);
  std::vector<double> means(k * d, 0.0);
  if (k <= d) {
    std::vector<std::size_t> axes(d);
    std::iota(axes.begin(), axes.end(), 0);
    std::shuffle(axes.begin(), axes.end(), rng);
    for (std::size_t c = 0; c < k; ++c) means[c * d + axes[c]] = radius;
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double v = normal(rng);
        means[c * d + j] = v;
        norm2 += v * v;
      }
      const double scale = norm2 > 0.0 ? radius / std::sqrt(norm2) : 0.0;
      for (std::size_t j = 0; j < d; ++j) means[c * d + j] *= scale;
    }
  }

  Dataset ds;
  ds.num_features = d;
  ds.num_classes = k;
  ds.features.reserve(k * n * d);
  ds.labels.reserve(k * n);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < d; ++j)
        ds.features.push_back(means[c * d + j] + normal(rng));
      ds.labels.push_back(static_cast<int>(c));
    }
  }
  return ds;
}

Partition dirichlet_partition(const Dataset& ds, const PartitionConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("partition beta must be > 0");
  if (cfg.num_clients == 0) throw std::invalid_argument("num_clients must be >= 1");
  if (ds.size() < cfg.num_clients)
    throw std::invalid_argument("dataset has " + std::to_string(ds.size()) +
                                " samples, too few for " +
                                std::to_string(cfg.num_clients) + " clients");

  const std::size_t num_clients = cfg.num_clients;
  Rng rng(cfg.seed);
  std::gamma_distribution<double> gamma(cfg.beta, 1.0);

  Partition part;
  part.assignments.assign(num_clients, {});

  for (auto& members : indices_by_class(ds)) {
    std::shuffle(members.begin(), members.end(), rng);

    std::vector<double> proportions(num_clients);
    for (double& p : proportions) p = gamma(rng);
    // Tiny beta can underflow every draw; the limit of Dirichlet(beta -> 0)
    // puts all mass on one client.
    if (std::all_of(proportions.begin(), proportions.end(),
                    [](double p) { return p <= 0.0; })) {
      std::uniform_int_distribution<std::size_t> pick(0, num_clients - 1);
      proportions[pick(rng)] = 1.0;
    }

    const auto counts = largest_remainder(proportions, members.size());
    std::size_t offset = 0;
    for (std::size_t c = 0; c < num_clients; ++c) {
      auto& dst = part.assignments[c];
      dst.insert(dst.end(), members.begin() + static_cast<std::ptrdiff_t>(offset),
                 members.begin() + static_cast<std::ptrdiff_t>(offset + counts[c]));
      offset += counts[c];
    }
  }

  for (auto& a : part.assignments) std::sort(a.begin(), a.end());

  for (std::size_t c = 0; c < num_clients; ++c) {
    if (!part.assignments[c].empty()) continue;
    auto donor = std::max_element(
        part.assignments.begin(), part.assignments.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    part.assignments[c].push_back(donor->back());
    donor->pop_back();
  }
  return part;
}

std::pair<Dataset, Dataset> holdout_split(const Dataset& ds, double fraction,
                                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("holdout fraction must lie in (0, 1)");

  auto by_class = indices_by_class(ds);
  std::vector<double> sizes(by_class.size());
  for (std::size_t c = 0; c < by_class.size(); ++c)
    sizes[c] = static_cast<double>(by_class[c].size());
  const auto total_held =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.size())));
  const auto held_counts = largest_remainder(sizes, total_held);

  Rng rng(seed);
  std::vector<std::size_t> keep, held;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (held_counts[c] == 0 || held_counts[c] == members.size())
      throw std::invalid_argument("holdout fraction " + std::to_string(fraction) +
                                  " leaves class " + std::to_string(c) +
                                  " empty in one split");
    std::shuffle(members.begin(), members.end(), rng);
    held.insert(held.end(), members.begin(),
                members.begin() + static_cast<std::ptrdiff_t>(held_counts[c]));
    keep.insert(keep.end(),
                members.begin() + static_cast<std::ptrdiff_t>(held_counts[c]),
                members.end());
  }
  std::sort(keep.begin(), keep.end());
  std::sort(held.begin(), held.end());
  return {subset(ds, keep), subset(ds, held)};
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  out.num_features = ds.num_features;
  out.num_classes = ds.num_classes;
  out.features.reserve(indices.size() * ds.num_features);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto r = ds.row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

double label_entropy(const Dataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  std::vector<std::size_t> counts(ds.num_classes, 0);
  for (std::size_t i : indices) ++counts[static_cast<std::size_t>(ds.labels[i])];
  double h = 0.0;
  const double n = static_cast<double>(indices.size());
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace fedstrat
