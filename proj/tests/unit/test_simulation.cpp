#include <numeric>
#include <sstream>

#include "doctest.h"
#include "fedstrat/aggregation.hpp"
#include "fedstrat/simulation.hpp"
#include "fedstrat/vec.hpp"
#include "support.hpp"

using namespace fedstrat;

namespace {

ScenarioConfig tiny(Strategy s = Strategy::agent()) {
  ScenarioConfig c;
  c.label = "tiny";
  c.seed = 17;
  c.num_clients = 6;
  c.num_malicious = 1;
  c.rounds = 12;
  c.data = {3, 4, 60, 3.0, 0.1, 0.2};
  c.beta = 0.5;
  c.train.learning_rate = 0.05;
  c.attack.kind = AttackKind::kStandard;
  c.strategy = s;
  return c;
}

std::string csv_of(const std::vector<RoundLog>& rows) {
  std::ostringstream os;
  write_rounds_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("one round gives one row") {
  auto c = tiny();
  c.rounds = 1;
  const auto r = run_scenario(c);
  CHECK(r.rows.size() == 1);
  CHECK(r.rows[0].round == 0);
  CHECK(r.rows[0].chosen_rule == RuleId::kFedAvg);  // documented first-round choice
}

TEST_CASE("summary statistics") {
  const auto r = run_scenario(tiny());
  const auto& s = r.summary;
  CHECK(s.rounds == 12);
  CHECK(s.selection_pct[0] + s.selection_pct[1] + s.selection_pct[2] == doctest::Approx(100.0));
  CHECK(s.final_accuracy == r.rows.back().test_accuracy);
  CHECK(s.std_last10 >= 0.0);
  for (const auto& row : r.rows) {
    CHECK(row.val_accuracy >= 0.0);
    CHECK(row.val_accuracy <= 1.0);
    CHECK(row.ucb_scores.has_value());
    CHECK_FALSE(row.wall_time_ms.has_value());
  }
}

TEST_CASE("identical config twice gives identical CSV bytes, at any thread count") {
  const auto c = tiny();
  const auto a = csv_of(run_scenario(c, 1).rows);
  CHECK(a == csv_of(run_scenario(c, 1).rows));
  CHECK(a == csv_of(run_scenario(c, 8).rows));
  CHECK(a == csv_of(run_scenario(c, 3).rows));
}

TEST_CASE("static runs never build a bandit") {
  for (RuleId r : kAllRules) {
    Simulation sim(tiny(Strategy::fixed(r)));
    CHECK(sim.agent() == nullptr);
    const auto row = sim.run_round();
    CHECK(row.chosen_rule == r);
    CHECK_FALSE(row.ucb_scores.has_value());
  }
}

TEST_CASE("attackers are fixed and counted") {
  Simulation sim(tiny());
  const auto& m = sim.malicious();
  CHECK(std::count(m.begin(), m.end(), true) == 1);

  auto clean = tiny();
  clean.attack.kind = AttackKind::kNone;
  Simulation sim2(clean);
  CHECK(std::count(sim2.malicious().begin(), sim2.malicious().end(), true) == 0);
}

TEST_CASE("data splits are disjoint and the partition covers the train split") {
  Simulation sim(tiny());
  const auto& c = sim.config();
  const std::size_t total = static_cast<std::size_t>(c.data.num_classes * c.data.samples_per_class);
  CHECK(sim.train_set().size() + sim.proxy_set().size() + sim.test_set().size() == total);
  CHECK(sim.proxy_set().size() == 18);
  CHECK(sim.test_set().size() == 36);
  std::size_t covered = 0;
  for (const auto& a : sim.partition().assignments) covered += a.size();
  CHECK(covered == sim.train_set().size());
}

TEST_CASE("stealth attackers match the benign mean norm inside a round") {
  auto c = tiny(Strategy::fixed(RuleId::kMedian));
  c.attack.kind = AttackKind::kStealth;
  c.num_malicious = 2;
  Simulation sim(c);
  sim.run_round();
  const auto& us = sim.last_updates();
  double benign = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i)
    if (!sim.malicious()[i]) benign += l2_norm(us[i].delta);
  benign /= static_cast<double>(us.size() - 2);
  for (std::size_t i = 0; i < us.size(); ++i)
    if (sim.malicious()[i]) CHECK(std::abs(l2_norm(us[i].delta) - benign) <= 1e-9 * benign);
}

TEST_CASE("causal ordering: the log replays through a fresh agent") {
  auto c = tiny();
  c.rounds = 30;
  const auto r = run_scenario(c);
  // Round-trip through CSV so the check covers the logged values.
  std::istringstream in(csv_of(r.rows));
  const auto rows = read_rounds_csv(in);
  LinUcbAgent agent(c.bandit);
  for (const auto& row : rows) {
    const auto sel = agent.select(row.scaled_state);
    CHECK(static_cast<RuleId>(sel.arm) == row.chosen_rule);
    REQUIRE(row.ucb_scores.has_value());
    for (std::size_t a = 0; a < 3; ++a) CHECK(sel.scores[a] == (*row.ucb_scores)[a]);
    agent.update(sel.arm, row.scaled_state, row.reward);
  }
}

TEST_CASE("rewards follow the formula on the logged proxy accuracies") {
  const auto c = tiny();
  Simulation sim(c);
  double prev = 0.0;
  {
    Simulation probe(c);
    prev = evaluate(probe.global_model(), probe.proxy_set());
  }
  for (int t = 0; t < 5; ++t) {
    const auto row = sim.run_round();
    CHECK(row.reward == compute_reward(row.val_accuracy, prev, row.chosen_rule, c.costs, c.reward));
    prev = row.val_accuracy;
  }
}

TEST_CASE("attack-free IID FedAvg on separable blobs reaches 0.9") {
  ScenarioConfig c;
  c.seed = 2;
  c.num_clients = 10;
  c.num_malicious = 0;
  c.rounds = 30;
  c.data = {2, 5, 300, 10.0, 0.1, 0.2};
  c.beta = 1e4;
  c.train.learning_rate = 0.1;
  c.strategy = Strategy::fixed(RuleId::kFedAvg);
  const auto r = run_scenario(c);
  CHECK(r.rows.back().val_accuracy >= 0.9);
}

TEST_CASE("identical client updates make all rules agree") {
  const auto ds = generate_synthetic(3, 4, 20, 2.0, 1);
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto m = init_model(4, 3, std::nullopt, 1);
  std::vector<UpdateVector> us;
  for (int c = 0; c < 6; ++c) us.push_back(local_train(m, {&ds, idx}, {0.05, 0.9, 1, 8}, 42));
  const auto avg = fed_avg(us);
  CHECK(coordinate_wise_median(us) == us[0]);
  CHECK(krum(us, {1}).update == us[0]);
  for (std::size_t i = 0; i < avg.size(); ++i) CHECK(avg.delta[i] == doctest::Approx(us[0].delta[i]).epsilon(1e-12));
}

TEST_CASE("divergence aborts the run") {
  auto c = tiny(Strategy::fixed(RuleId::kFedAvg));
  c.train.learning_rate = 1e308;  // 1e300 saturates softmax and stays finite
  Simulation sim(c);
  CHECK_THROWS_AS(sim.run_round(), DivergenceError);
}

TEST_CASE("invalid configs are rejected before any work") {
  auto c = tiny();
  c.num_malicious = 4;  // N = 6 < f + 3 with the Krum arm
  CHECK_THROWS_AS(Simulation{c}, ConfigError);
}

TEST_CASE("wall time is recorded only on request") {
  auto c = tiny();
  c.rounds = 2;
  c.record_wall_time = true;
  for (const auto& row : run_scenario(c).rows) CHECK(row.wall_time_ms.has_value());
}
