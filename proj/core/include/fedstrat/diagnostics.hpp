#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "fedstrat/model.hpp"

namespace fedstrat {

/// Per-round diagnostic context computed from the client updates.
struct StateVector {
  double norm_variance = 0.0;          // population variance of ||u_i||
  double avg_cosine_similarity = 0.0;  // mean over unordered pairs
  double mean_update_norm = 0.0;       // ||mean_i u_i||

  std::array<double, 3> as_array() const noexcept {
    return {norm_variance, avg_cosine_similarity, mean_update_norm};
  }
};

/// Requires N >= 2 equal-length updates (std::invalid_argument otherwise).
/// A zero vector has cosine 0 with every partner.
StateVector compute_state(std::span<const UpdateVector> updates);

enum class ContextScaling {
  /// Running min-max per component. A round that sets a new minimum in every
  /// component maps to the zero context.
  kMinMax,
  /// Non-negative components divided by their running maximum; cosine
  /// similarity mapped affinely from [-1, 1]. Zero only for zero raw values.
  kMaxAbs,
};

std::string_view to_string(ContextScaling s) noexcept;
std::optional<ContextScaling> parse_context_scaling(std::string_view s) noexcept;

/// Online scaler turning raw states into bandit contexts in [0, 1]^3.
/// `observe_and_scale` first folds the new state into the running
/// statistics and then scales it. In min-max mode a component whose range is
/// still degenerate (as on the first round) passes through unscaled, clamped
/// to [0, 1].
class StateScaler {
 public:
  explicit StateScaler(ContextScaling mode = ContextScaling::kMinMax) : mode_(mode) {}

  std::array<double, 3> observe_and_scale(const StateVector& s);
  std::array<double, 3> scale(const StateVector& s) const;
  std::size_t observations() const noexcept { return count_; }
  ContextScaling mode() const noexcept { return mode_; }

 private:
  ContextScaling mode_;
  std::array<double, 3> lo_{};
  std::array<double, 3> hi_{};
  std::size_t count_ = 0;
};

}  // namespace fedstrat
