#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "fedstrat/model.hpp"

namespace fedstrat {

/// Aggregation rules of the defense arsenal. The integer values double as
/// bandit arm indices and appear in logs and configs.
enum class RuleId : int { kFedAvg = 0, kMedian = 1, kKrum = 2 };

inline constexpr std::size_t kNumRules = 3;
inline constexpr std::array<RuleId, kNumRules> kAllRules = {RuleId::kFedAvg, RuleId::kMedian,
                                                            RuleId::kKrum};

constexpr std::size_t index_of(RuleId r) noexcept { return static_cast<std::size_t>(r); }

/// "FedAvg", "Median", "Krum".
std::string_view to_string(RuleId r) noexcept;
/// Accepts display names case-insensitively as well as "0", "1", "2".
std::optional<RuleId> parse_rule(std::string_view s) noexcept;

struct KrumConfig {
  std::size_t f = 0;  // assumed number of Byzantine clients
};

struct KrumResult {
  UpdateVector update;
  std::size_t selected_index = 0;
};

// All rules throw std::invalid_argument on an empty input or on vectors of
// differing length.

/// Element-wise arithmetic mean.
UpdateVector fed_avg(std::span<const UpdateVector> updates);

/// Per-coordinate median; an even count takes the mean of the two middle
/// order statistics.
UpdateVector coordinate_wise_median(std::span<const UpdateVector> updates);

/// Single Krum: scores each update by the sum of its k = N - f - 2 smallest
/// squared distances to the other updates and returns the lowest-scoring one
/// (lowest index on ties). Requires N >= f + 3.
KrumResult krum(std::span<const UpdateVector> updates, const KrumConfig& cfg);

/// Dispatches to the rule; for Krum the selected index is discarded.
UpdateVector aggregate(RuleId rule, std::span<const UpdateVector> updates,
                       const KrumConfig& krum_cfg);

}  // namespace fedstrat
