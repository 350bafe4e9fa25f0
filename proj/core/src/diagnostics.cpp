#include "fedstrat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fedstrat/vec.hpp"

namespace fedstrat {

StateVector compute_state(std::span<const UpdateVector> updates) {
  const std::size_t n = updates.size();
  if (n < 2) throw std::invalid_argument("compute_state: need at least 2 updates");
  const std::size_t d = updates.front().size();
  for (const auto& u : updates)
    if (u.size() != d) throw std::invalid_argument("compute_state: update length mismatch");

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = l2_norm(updates[i].delta);

  double mean_norm = 0.0;
  for (double v : norms) mean_norm += v;
  mean_norm /= static_cast<double>(n);
  double var = 0.0;
  for (double v : norms) var += (v - mean_norm) * (v - mean_norm);
  var /= static_cast<double>(n);

  double cos_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (norms[i] == 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (norms[j] == 0.0) continue;
      const double c = dot(updates[i].delta, updates[j].delta) / (norms[i] * norms[j]);
      cos_sum += std::clamp(c, -1.0, 1.0);
    }
  }
  const double pairs = static_cast<double>(n * (n - 1) / 2);

  std::vector<double> mean(d, 0.0);
  for (const auto& u : updates)
    for (std::size_t j = 0; j < d; ++j) mean[j] += u.delta[j];
  for (double& v : mean) v /= static_cast<double>(n);

  return {var, cos_sum / pairs, l2_norm(mean)};
}

std::string_view to_string(ContextScaling s) noexcept {
  return s == ContextScaling::kMinMax ? "minmax" : "maxabs";
}

std::optional<ContextScaling> parse_context_scaling(std::string_view s) noexcept {
  if (s == "minmax") return ContextScaling::kMinMax;
  if (s == "maxabs") return ContextScaling::kMaxAbs;
  return std::nullopt;
}

std::array<double, 3> StateScaler::observe_and_scale(const StateVector& s) {
  const auto v = s.as_array();
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = mode_ == ContextScaling::kMaxAbs ? std::abs(v[i]) : v[i];
    if (count_ == 0) {
      lo_[i] = hi_[i] = x;
    } else {
      lo_[i] = std::min(lo_[i], x);
      hi_[i] = std::max(hi_[i], x);
    }
  }
  ++count_;
  return scale(s);
}

std::array<double, 3> StateScaler::scale(const StateVector& s) const {
  const auto v = s.as_array();
  std::array<double, 3> out{};
  if (mode_ == ContextScaling::kMaxAbs) {
    out[0] = hi_[0] > 0.0 ? v[0] / hi_[0] : 0.0;
    out[1] = 0.5 * (v[1] + 1.0);
    out[2] = hi_[2] > 0.0 ? v[2] / hi_[2] : 0.0;
    for (double& x : out) x = std::clamp(x, 0.0, 1.0);
    return out;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double range = hi_[i] - lo_[i];
    const double x = (count_ == 0 || range <= 0.0) ? v[i] : (v[i] - lo_[i]) / range;
    out[i] = std::clamp(x, 0.0, 1.0);
  }
  return out;
}

}  // namespace fedstrat
