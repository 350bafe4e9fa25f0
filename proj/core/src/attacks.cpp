#include "fedstrat/attacks.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "fedstrat/vec.hpp"

namespace fedstrat {

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kStandard: return "standard";
    case AttackKind::kStealth: return "stealth";
  }
  return "none";
}

std::optional<AttackKind> parse_attack_kind(std::string_view s) noexcept {
  if (s == "none") return AttackKind::kNone;
  if (s == "standard") return AttackKind::kStandard;
  if (s == "stealth") return AttackKind::kStealth;
  return std::nullopt;
}

std::string_view to_string(StealthNormSource src) noexcept {
  return src == StealthNormSource::kOracle ? "oracle" : "self_estimate";
}

std::optional<StealthNormSource> parse_norm_source(std::string_view s) noexcept {
  if (s == "oracle") return StealthNormSource::kOracle;
  if (s == "self_estimate") return StealthNormSource::kSelfEstimate;
  return std::nullopt;
}

UpdateVector standard_poison(const UpdateVector& honest, const AttackConfig& cfg) {
  const double factor = (cfg.effective_sign_flip() ? -1.0 : 1.0) * cfg.scale_factor;
  UpdateVector out = honest;
  for (double& v : out.delta) v *= factor;
  return out;
}

UpdateVector stealth_poison(const UpdateVector& honest,
                            std::span<const double> benign_norms,
                            const AttackConfig& cfg) {
  if (benign_norms.empty())
    throw std::invalid_argument("stealth_poison: no benign norms to match");
  if (honest.delta.empty()) return honest;

  const double target =
      std::accumulate(benign_norms.begin(), benign_norms.end(), 0.0) /
      static_cast<double>(benign_norms.size());
  const double sign = cfg.effective_sign_flip() ? -1.0 : 1.0;

  UpdateVector out = honest;
  double norm = l2_norm(out.delta);
  if (norm == 0.0) {
    std::cerr << "warning: stealth_poison got a zero honest update; "
                 "using the all-ones direction\n";
    std::fill(out.delta.begin(), out.delta.end(), 1.0);
    norm = std::sqrt(static_cast<double>(out.delta.size()));
  }
  const double factor = sign * target / norm;
  for (double& v : out.delta) v *= factor;
  return out;
}

}  // namespace fedstrat
