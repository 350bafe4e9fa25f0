#include "doctest.h"
#include "fedstrat/scenario.hpp"
#include "support.hpp"

using namespace fedstrat;
using nlohmann::json;

namespace {

std::string field_of(const json& j) {
  try {
    validate(scenario_from_json(j));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults carry the reference hyperparameters") {
  const ScenarioConfig c;
  CHECK(c.num_clients == 20);
  CHECK(c.num_malicious == 5);
  CHECK(c.train.learning_rate == 0.001);
  CHECK(c.train.momentum == 0.9);
  CHECK(c.train.epochs == 1);
  CHECK(c.train.batch_size == 32);
  CHECK(c.bandit.alpha == 1.5);
  CHECK(c.costs.cost == std::array<double, 3>{0.1, 0.4, 0.8});
  CHECK(c.attack.scale_factor == 5.0);
  CHECK(c.data.holdout_fraction == 0.1);
  CHECK(c.context_scaling == ContextScaling::kMinMax);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config round-trips through JSON") {
  ScenarioConfig c;
  c.label = "rt";
  c.seed = 99;
  c.rounds = 7;
  c.beta = 0.1;
  c.hidden = 16;
  c.train.learning_rate = 0.25;
  c.attack = {AttackKind::kStealth, 3.0, false, StealthNormSource::kSelfEstimate};
  c.strategy = Strategy::fixed(RuleId::kKrum);
  c.krum_f = 4;
  c.context_scaling = ContextScaling::kMaxAbs;
  c.reward.lambda_cost = 2.0;
  const json j = to_json(c);
  const auto back = scenario_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(to_json(scenario_from_json(json::parse(j.dump()))).dump() == j.dump());

  // Property: random perturbations of scalar fields survive the round trip.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testing::Gen g(seed);
    ScenarioConfig r;
    r.seed = g.size(0, 1u << 30);
    r.num_clients = g.size(3, 40);
    r.num_malicious = g.size(0, r.num_clients - 3);
    r.beta = g.real(0.01, 20.0);
    r.train.learning_rate = g.real(0.0, 2.0);
    r.reward.lambda_cost = g.real(0.0, 3.0);
    r.bandit.alpha = g.real(0.0, 3.0);
    r.attack.sign_flip = seed % 3 == 0 ? std::nullopt : std::optional<bool>(seed % 2 == 0);
    r.strategy = seed % 4 == 3 ? Strategy::agent() : Strategy::fixed(kAllRules[seed % 3]);
    CHECK(to_json(scenario_from_json(to_json(r))) == to_json(r));
  }
}

TEST_CASE("partial configs keep defaults") {
  const auto c = scenario_from_json(json::parse(R"({"seed": 3, "reward": {"lambda_cost": 1.0}})"));
  CHECK(c.seed == 3);
  CHECK(c.reward.lambda_cost == 1.0);
  CHECK(c.num_clients == 20);
  CHECK_FALSE(c.attack.sign_flip);
}

TEST_CASE("strategy spellings") {
  CHECK(parse_strategy("adaptive") == Strategy::agent());
  CHECK(parse_strategy("median") == Strategy::fixed(RuleId::kMedian));
  CHECK(parse_strategy("Krum") == Strategy::fixed(RuleId::kKrum));
  CHECK(parse_strategy("0") == Strategy::fixed(RuleId::kFedAvg));
  CHECK_FALSE(parse_strategy("bulyan"));
  CHECK(scenario_from_json(json::parse(R"({"strategy": "fedavg"})")).strategy ==
        Strategy::fixed(RuleId::kFedAvg));
}

TEST_CASE("validation names the offending field") {
  CHECK(field_of(json::parse(R"({"num_malicious": 18})")) == "num_malicious");
  CHECK(field_of(json::parse(R"({"num_malicious": 18, "strategy": "fedavg"})")).empty());
  CHECK(field_of(json::parse(R"({"krum": {"f": 18}})")) == "krum.f");
  CHECK(field_of(json::parse(R"({"num_malicious": 20})")) == "num_malicious");
  CHECK(field_of(json::parse(R"({"rounds": 0})")) == "rounds");
  CHECK(field_of(json::parse(R"({"partition": {"beta": 0}})")) == "partition.beta");
  CHECK(field_of(json::parse(R"({"train": {"momentum": 1.0}})")) == "train.momentum");
  CHECK(field_of(json::parse(R"({"reward": {"lambda_cost": -1}})")) == "reward.lambda_cost");
  CHECK(field_of(json::parse(R"({"costs": {"krum": 1.5}})")) == "costs.krum");
  CHECK(field_of(json::parse(R"({"schema_version": 2})")) == "schema_version");
  CHECK(field_of(json::parse(R"({"label": "a/b"})")) == "label");
  CHECK(field_of(json::parse(R"({"bandit": {"alpha": -0.1}})")) == "bandit.alpha");
}

TEST_CASE("Krum precondition message cites N >= f + 3") {
  ScenarioConfig c;
  c.num_malicious = 18;
  try {
    validate(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("N >= f + 3") != std::string::npos);
  }
}

TEST_CASE("parse errors name the field") {
  auto field = [](const char* text) {
    try {
      scenario_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  CHECK(field(R"({"bogus": 1})") == "bogus");
  CHECK(field(R"({"train": {"lr": 0.1}})") == "train.lr");
  CHECK(field(R"({"rounds": "ten"})") == "rounds");
  CHECK(field(R"({"num_clients": -3})") == "num_clients");
  CHECK(field(R"({"attack": {"kind": "backdoor"}})") == "attack.kind");
  CHECK(field(R"({"strategy": "trimmed"})") == "strategy");
  CHECK(field(R"({"data": 5})") == "data");
  CHECK(field(R"([1, 2])") == "<root>");
}

TEST_CASE("set_dotted") {
  json j = json::object();
  set_dotted(j, "reward.lambda_cost", 2.0);
  CHECK(j["reward"]["lambda_cost"] == 2.0);
  set_dotted(j, "seed", 4);
  CHECK(j["seed"] == 4);
  CHECK_THROWS_AS(set_dotted(j, "seed.x", 1), ConfigError);
}
