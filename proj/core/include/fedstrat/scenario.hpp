#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "fedstrat/aggregation.hpp"
#include "fedstrat/attacks.hpp"
#include "fedstrat/bandit.hpp"
#include "fedstrat/diagnostics.hpp"
#include "fedstrat/model.hpp"

namespace fedstrat {

inline constexpr int kSchemaVersion = 1;

/// Either a fixed aggregation rule or the LinUCB agent.
struct Strategy {
  bool adaptive = true;
  RuleId rule = RuleId::kFedAvg;  // used when !adaptive

  static Strategy fixed(RuleId r) { return {false, r}; }
  static Strategy agent() { return {true, RuleId::kFedAvg}; }
  bool uses_krum() const noexcept { return adaptive || rule == RuleId::kKrum; }
  bool operator==(const Strategy&) const = default;
};

/// "adaptive" or the lower-case rule name ("fedavg", "median", "krum").
std::string to_string(const Strategy& s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct SyntheticDataConfig {
  int num_classes = 10;
  int num_features = 20;
  int samples_per_class = 200;
  double class_separation = 3.0;
  double holdout_fraction = 0.1;  // server proxy validation set
  double test_fraction = 0.2;     // reporting split, disjoint from training and proxy
};

/// Full declarative description of one experiment. Defaults follow the
/// reference hyperparameters (N=20, f=5, E=1, lr=0.001, momentum 0.9,
/// batch 32, alpha=1.5, costs 0.1/0.4/0.8).
struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string label = "scenario";
  std::uint64_t seed = 0;
  std::size_t num_clients = 20;
  std::size_t num_malicious = 5;
  std::size_t rounds = 50;
  SyntheticDataConfig data;
  double beta = 0.5;
  int hidden = 0;  // 0 = logistic regression
  TrainConfig train;
  AttackConfig attack;
  Strategy strategy;
  std::optional<std::size_t> krum_f;  // unset: tracks num_malicious
  BanditConfig bandit;
  ContextScaling context_scaling = ContextScaling::kMinMax;
  CostTable costs;
  RewardParams reward;
  bool record_wall_time = false;

  std::size_t effective_krum_f() const noexcept { return krum_f.value_or(num_malicious); }
};

/// Validation / parse failure pinned to a dotted config field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& cfg);

/// Full serialization; every field is written, so the output is canonical.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Missing keys keep their defaults; unknown keys and ill-typed values throw
/// ConfigError. Does not call validate().
ScenarioConfig scenario_from_json(const nlohmann::json& j);

/// Sets a dotted key (e.g. "reward.lambda_cost") in a JSON config, creating
/// intermediate objects. Throws ConfigError if a non-object is in the way.
void set_dotted(nlohmann::json& j, const std::string& dotted_key, nlohmann::json value);

}  // namespace fedstrat
