#include "fedstrat/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "fedstrat/aggregation.hpp"
#include "fedstrat/attacks.hpp"
#include "fedstrat/rng.hpp"
#include "fedstrat/vec.hpp"

namespace fedstrat {
namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. If any call throws,
// the exception of the lowest failing index is rethrown after all workers
// have joined.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg, std::size_t threads)
    : cfg_(std::move(cfg)), threads_(std::max<std::size_t>(threads, 1)) {
  validate(cfg_);
  const auto& d = cfg_.data;

  const Dataset full = generate_synthetic(d.num_classes, d.num_features, d.samples_per_class,
                                          d.class_separation,
                                          derive_seed(cfg_.seed, Stream::kData));
  auto [rest, test] = holdout_split(full, d.test_fraction, derive_seed(cfg_.seed, Stream::kTestSplit));
  // holdout_fraction is relative to the full dataset.
  auto [train, proxy] = holdout_split(rest, d.holdout_fraction / (1.0 - d.test_fraction),
                                      derive_seed(cfg_.seed, Stream::kProxySplit));
  train_ = std::move(train);
  proxy_ = std::move(proxy);
  test_ = std::move(test);

  partition_ = dirichlet_partition(
      train_, {cfg_.beta, cfg_.num_clients, derive_seed(cfg_.seed, Stream::kPartition)});

  // Attackers are fixed for the whole run.
  std::vector<std::size_t> ids(cfg_.num_clients);
  std::iota(ids.begin(), ids.end(), 0);
  Rng pick(derive_seed(cfg_.seed, Stream::kMaliciousPick));
  std::shuffle(ids.begin(), ids.end(), pick);
  malicious_.assign(cfg_.num_clients, false);
  if (cfg_.attack.kind != AttackKind::kNone)
    for (std::size_t i = 0; i < cfg_.num_malicious; ++i) malicious_[ids[i]] = true;

  global_ = init_model(d.num_features, d.num_classes,
                       cfg_.hidden > 0 ? std::optional<int>(cfg_.hidden) : std::nullopt,
                       derive_seed(cfg_.seed, Stream::kModelInit));
  prev_val_accuracy_ = evaluate(global_, proxy_);

  scaler_ = StateScaler(cfg_.context_scaling);
  if (cfg_.strategy.adaptive) agent_ = std::make_unique<LinUcbAgent>(cfg_.bandit);
}

std::vector<UpdateVector> Simulation::collect_updates() {
  const std::size_t n = cfg_.num_clients;
  std::vector<UpdateVector> updates(n);
  const ModelParams& snapshot = global_;

  parallel_for(n, threads_, [&](std::size_t c) {
    const DatasetView shard{&train_, partition_.assignments[c]};
    const auto seed = derive_seed(cfg_.seed, {static_cast<std::uint64_t>(Stream::kClientTrain), c,
                                              static_cast<std::uint64_t>(round_)});
    updates[c] = local_train(snapshot, shard, cfg_.train, seed);
  });

  if (cfg_.attack.kind == AttackKind::kNone) return updates;

  std::vector<double> benign_norms;
  for (std::size_t c = 0; c < n; ++c)
    if (!malicious_[c]) benign_norms.push_back(l2_norm(updates[c].delta));

  for (std::size_t c = 0; c < n; ++c) {
    if (!malicious_[c]) continue;
    if (cfg_.attack.kind == AttackKind::kStandard) {
      updates[c] = standard_poison(updates[c], cfg_.attack);
    } else if (cfg_.attack.norm_source == StealthNormSource::kOracle) {
      updates[c] = stealth_poison(updates[c], benign_norms, cfg_.attack);
    } else {
      const double own = l2_norm(updates[c].delta);
      updates[c] = stealth_poison(updates[c], std::span<const double>(&own, 1), cfg_.attack);
    }
  }
  return updates;
}

RoundLog Simulation::run_round() {
  const auto t0 = std::chrono::steady_clock::now();

  RoundLog log;
  log.round = round_;

  auto updates = collect_updates();
  log.state = compute_state(updates);
  log.scaled_state = scaler_.observe_and_scale(log.state);

  if (agent_) {
    const auto sel = agent_->select(log.scaled_state);
    log.chosen_rule = static_cast<RuleId>(sel.arm);
    log.ucb_scores = std::array<double, 3>{sel.scores[0], sel.scores[1], sel.scores[2]};
  } else {
    log.chosen_rule = cfg_.strategy.rule;
  }

  const auto step =
      aggregate(log.chosen_rule, updates, KrumConfig{cfg_.effective_krum_f()});
  apply_update(global_, step);
  if (!std::all_of(global_.flat.begin(), global_.flat.end(), [](double x) { return std::isfinite(x); }))
    throw DivergenceError("global model diverged (non-finite parameters) in round " +
                          std::to_string(round_));

  log.val_accuracy = evaluate(global_, proxy_);
  log.test_accuracy = evaluate(global_, test_);
  log.reward = compute_reward(log.val_accuracy, prev_val_accuracy_, log.chosen_rule, cfg_.costs,
                              cfg_.reward);
  prev_val_accuracy_ = log.val_accuracy;

  if (agent_) agent_->update(index_of(log.chosen_rule), log.scaled_state, log.reward);

  last_updates_ = std::move(updates);
  ++round_;

  if (cfg_.record_wall_time)
    log.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return log;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::size_t threads) {
  Simulation sim(cfg, threads);
  ScenarioResult result;
  result.rows.reserve(cfg.rounds);
  for (std::size_t t = 0; t < cfg.rounds; ++t) result.rows.push_back(sim.run_round());
  result.summary = summarize(result.rows, cfg.costs);
  return result;
}

}  // namespace fedstrat
