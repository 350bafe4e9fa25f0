#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "fedstrat/bandit.hpp"
#include "fedstrat/data.hpp"
#include "fedstrat/diagnostics.hpp"
#include "fedstrat/model.hpp"
#include "fedstrat/round_log.hpp"
#include "fedstrat/scenario.hpp"

namespace fedstrat {

/// The server side of one federated run: owns the global model, the client
/// shards and (for adaptive runs) the LinUCB agent.
///
/// Each call to run_round performs one closed-loop step:
///   1. broadcast W_t;
///   2. every client trains locally; malicious clients then poison their
///      honest update;
///   3. compute the diagnostic state of the round's updates;
///   4. pick a rule (fixed, or LinUCB on the scaled state);
///   5. W_{t+1} = W_t + rule(updates);
///   6. evaluate on the proxy set, compute the reward and, if adaptive,
///      update the played arm with the pre-aggregation state.
///
/// Client training fans out over `threads` workers; results are gathered by
/// client index, so output does not depend on the thread count.
class Simulation {
 public:
  /// Validates `cfg` (ConfigError on failure) and builds data, partition,
  /// model and agent.
  explicit Simulation(ScenarioConfig cfg, std::size_t threads = 1);

  /// Throws DivergenceError if local training or the aggregated model blows up.
  RoundLog run_round();

  std::size_t rounds_completed() const noexcept { return round_; }
  const ScenarioConfig& config() const noexcept { return cfg_; }
  const ModelParams& global_model() const noexcept { return global_; }
  const Partition& partition() const noexcept { return partition_; }
  const Dataset& train_set() const noexcept { return train_; }
  const Dataset& proxy_set() const noexcept { return proxy_; }
  const Dataset& test_set() const noexcept { return test_; }
  const std::vector<bool>& malicious() const noexcept { return malicious_; }
  /// Null for static strategies.
  const LinUcbAgent* agent() const noexcept { return agent_.get(); }

  /// Local updates of the most recent round, after poisoning.
  const std::vector<UpdateVector>& last_updates() const noexcept { return last_updates_; }

 private:
  std::vector<UpdateVector> collect_updates();

  ScenarioConfig cfg_;
  std::size_t threads_;
  Dataset train_, proxy_, test_;
  Partition partition_;
  std::vector<bool> malicious_;
  ModelParams global_;
  std::unique_ptr<LinUcbAgent> agent_;
  StateScaler scaler_;
  double prev_val_accuracy_ = 0.0;
  std::size_t round_ = 0;
  std::vector<UpdateVector> last_updates_;
};

struct ScenarioResult {
  std::vector<RoundLog> rows;
  RunSummary summary;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::size_t threads = 1);

}  // namespace fedstrat
