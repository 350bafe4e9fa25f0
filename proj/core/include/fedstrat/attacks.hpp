#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "fedstrat/model.hpp"

namespace fedstrat {

enum class AttackKind { kNone, kStandard, kStealth };

/// Where a stealth attacker takes its target norm from. `kOracle` reads the
/// true benign norms of the current round (simulation privilege);
/// `kSelfEstimate` uses only the attacker's own honest norm.
enum class StealthNormSource { kOracle, kSelfEstimate };

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  double scale_factor = 5.0;
  /// Unset means the per-kind default: off for standard, on for stealth.
  std::optional<bool> sign_flip;
  StealthNormSource norm_source = StealthNormSource::kOracle;

  bool effective_sign_flip() const noexcept {
    return sign_flip.value_or(kind == AttackKind::kStealth);
  }
};

std::string_view to_string(AttackKind kind) noexcept;
std::optional<AttackKind> parse_attack_kind(std::string_view s) noexcept;
std::string_view to_string(StealthNormSource src) noexcept;
std::optional<StealthNormSource> parse_norm_source(std::string_view s) noexcept;

/// Loud poisoning: returns sign * scale_factor * honest.
UpdateVector standard_poison(const UpdateVector& honest, const AttackConfig& cfg);

/// Norm-matched poisoning: the (optionally sign-flipped) honest direction
/// rescaled to the mean of `benign_norms`. A zero honest update falls back to
/// the normalized all-ones direction.
UpdateVector stealth_poison(const UpdateVector& honest,
                            std::span<const double> benign_norms,
                            const AttackConfig& cfg);

}  // namespace fedstrat
