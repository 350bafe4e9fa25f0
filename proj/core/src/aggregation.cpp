#include "fedstrat/aggregation.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedstrat/vec.hpp"

namespace fedstrat {
namespace {

std::size_t check_shapes(std::span<const UpdateVector> updates, const char* who) {
  if (updates.empty()) throw std::invalid_argument(std::string(who) + ": no updates");
  const std::size_t d = updates.front().size();
  for (const auto& u : updates)
    if (u.size() != d)
      throw std::invalid_argument(std::string(who) + ": update length mismatch");
  return d;
}

}  // namespace

std::string_view to_string(RuleId r) noexcept {
  switch (r) {
    case RuleId::kFedAvg: return "FedAvg";
    case RuleId::kMedian: return "Median";
    case RuleId::kKrum: return "Krum";
  }
  return "FedAvg";
}

std::optional<RuleId> parse_rule(std::string_view s) noexcept {
  std::string lower(s);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "fedavg" || lower == "0") return RuleId::kFedAvg;
  if (lower == "median" || lower == "1") return RuleId::kMedian;
  if (lower == "krum" || lower == "2") return RuleId::kKrum;
  return std::nullopt;
}

UpdateVector fed_avg(std::span<const UpdateVector> updates) {
  const std::size_t d = check_shapes(updates, "fed_avg");
  UpdateVector out;
  out.delta.assign(d, 0.0);
  for (const auto& u : updates)
    for (std::size_t j = 0; j < d; ++j) out.delta[j] += u.delta[j];
  const double inv = 1.0 / static_cast<double>(updates.size());
  for (double& v : out.delta) v *= inv;
  return out;
}

UpdateVector coordinate_wise_median(std::span<const UpdateVector> updates) {
  const std::size_t d = check_shapes(updates, "coordinate_wise_median");
  const std::size_t n = updates.size();
  const std::size_t mid = n / 2;

  UpdateVector out;
  out.delta.resize(d);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = updates[i].delta[j];
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid),
                     column.end());
    const double upper = column[mid];
    if (n % 2 == 1) {
      out.delta[j] = upper;
    } else {
      const double lower =
          *std::max_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid));
      out.delta[j] = 0.5 * (lower + upper);
    }
  }
  return out;
}

KrumResult krum(std::span<const UpdateVector> updates, const KrumConfig& cfg) {
  check_shapes(updates, "krum");
  const std::size_t n = updates.size();
  if (n < cfg.f + 3)
    throw std::invalid_argument("krum: need N >= f + 3 (N=" + std::to_string(n) +
                                ", f=" + std::to_string(cfg.f) + ")");
  const std::size_t k = n - cfg.f - 2;

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] = squared_distance(updates[i].delta, updates[j].delta);

  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(dist[i * n + j]);
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k),
                      others.end());
    double score = 0.0;
    for (std::size_t m = 0; m < k; ++m) score += others[m];
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return {updates[best], best};
}

UpdateVector aggregate(RuleId rule, std::span<const UpdateVector> updates,
                       const KrumConfig& krum_cfg) {
  switch (rule) {
    case RuleId::kFedAvg: return fed_avg(updates);
    case RuleId::kMedian: return coordinate_wise_median(updates);
    case RuleId::kKrum: return krum(updates, krum_cfg).update;
  }
  throw std::invalid_argument("aggregate: unknown rule");
}

}  // namespace fedstrat
