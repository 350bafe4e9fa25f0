#include "fedstrat/scenario.hpp"

#include <set>
#include <sstream>

namespace fedstrat {
namespace {

using nlohmann::json;

// Walks one JSON object, reading known keys and rejecting unknown ones.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  // Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError(field(key), "expected a boolean");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned())
          throw ConfigError(field(key), "expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError(field(key), "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(field(key), "expected a string");
      }
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_object(ObjectReader& parent, const std::string& key, Fn&& fn) {
  if (const json* c = parent.child(key)) {
    ObjectReader r(*c, parent.field(key));
    fn(r);
    r.finish();
  }
}

}  // namespace

std::string to_string(const Strategy& s) {
  if (s.adaptive) return "adaptive";
  switch (s.rule) {
    case RuleId::kFedAvg: return "fedavg";
    case RuleId::kMedian: return "median";
    case RuleId::kKrum: return "krum";
  }
  return "fedavg";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "adaptive") return Strategy::agent();
  if (auto r = parse_rule(s)) return Strategy::fixed(*r);
  return std::nullopt;
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field, msg);
  };
  if (c.schema_version != kSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(c.schema_version) +
                               " (expected " + std::to_string(kSchemaVersion) + ")");
  if (c.label.empty()) fail("label", "must be non-empty");
  if (c.label.find_first_of("/\\") != std::string::npos)
    fail("label", "must not contain path separators");
  if (c.num_clients < 2) fail("num_clients", "need at least 2 clients");
  if (c.num_malicious >= c.num_clients)
    fail("num_malicious", "must satisfy 0 <= f < N (f=" + std::to_string(c.num_malicious) +
                              ", N=" + std::to_string(c.num_clients) + ")");
  if (c.rounds < 1) fail("rounds", "must be >= 1");

  const auto& d = c.data;
  if (d.num_classes < 1) fail("data.num_classes", "must be >= 1");
  if (d.num_features < 1) fail("data.num_features", "must be >= 1");
  if (d.samples_per_class < 1) fail("data.samples_per_class", "must be >= 1");
  if (!(d.class_separation > 0.0)) fail("data.class_separation", "must be > 0");
  if (!(d.holdout_fraction > 0.0 && d.holdout_fraction < 1.0))
    fail("data.holdout_fraction", "must lie in (0, 1)");
  if (!(d.test_fraction > 0.0 && d.test_fraction < 1.0))
    fail("data.test_fraction", "must lie in (0, 1)");
  if (!(d.holdout_fraction + d.test_fraction < 1.0))
    fail("data.test_fraction", "holdout_fraction + test_fraction must be < 1");
  const double train_samples = static_cast<double>(d.num_classes) * d.samples_per_class *
                               (1.0 - d.holdout_fraction - d.test_fraction);
  if (train_samples < static_cast<double>(c.num_clients))
    fail("data.samples_per_class", "training split too small to give every client a sample");

  if (!(c.beta > 0.0)) fail("partition.beta", "must be > 0");
  if (c.hidden < 0) fail("model.hidden", "must be >= 0");

  if (!(c.train.learning_rate >= 0.0)) fail("train.learning_rate", "must be >= 0");
  if (!(c.train.momentum >= 0.0 && c.train.momentum < 1.0))
    fail("train.momentum", "must lie in [0, 1)");
  if (c.train.epochs < 1) fail("train.epochs", "must be >= 1");
  if (c.train.batch_size < 1) fail("train.batch_size", "must be >= 1");

  if (!(c.attack.scale_factor > 0.0)) fail("attack.scale_factor", "must be > 0");

  if (c.strategy.uses_krum()) {
    const std::size_t f = c.effective_krum_f();
    if (c.num_clients < f + 3)
      fail(c.krum_f ? "krum.f" : "num_malicious",
           "Krum requires N >= f + 3 (N=" + std::to_string(c.num_clients) +
               ", f=" + std::to_string(f) + ")");
  }

  if (!(c.bandit.alpha >= 0.0)) fail("bandit.alpha", "must be >= 0");
  if (c.bandit.num_arms != kNumRules) fail("bandit", "num_arms must be 3");
  if (c.bandit.context_dim != 3) fail("bandit", "context_dim must be 3");
  static constexpr const char* kCostKeys[] = {"costs.fedavg", "costs.median", "costs.krum"};
  for (std::size_t i = 0; i < kNumRules; ++i)
    if (!(c.costs.cost[i] >= 0.0 && c.costs.cost[i] <= 1.0)) fail(kCostKeys[i], "must lie in [0, 1]");
  if (!(c.reward.lambda_cost >= 0.0)) fail("reward.lambda_cost", "must be >= 0");
}

nlohmann::json to_json(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["label"] = c.label;
  j["seed"] = c.seed;
  j["num_clients"] = c.num_clients;
  j["num_malicious"] = c.num_malicious;
  j["rounds"] = c.rounds;
  j["data"] = {{"num_classes", c.data.num_classes},
               {"num_features", c.data.num_features},
               {"samples_per_class", c.data.samples_per_class},
               {"class_separation", c.data.class_separation},
               {"holdout_fraction", c.data.holdout_fraction},
               {"test_fraction", c.data.test_fraction}};
  j["partition"] = {{"beta", c.beta}};
  j["model"] = {{"hidden", c.hidden}};
  j["train"] = {{"learning_rate", c.train.learning_rate},
                {"momentum", c.train.momentum},
                {"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size}};
  j["attack"] = {{"kind", std::string(to_string(c.attack.kind))},
                 {"scale_factor", c.attack.scale_factor},
                 {"sign_flip", c.attack.sign_flip ? json(*c.attack.sign_flip) : json(nullptr)},
                 {"norm_source", std::string(to_string(c.attack.norm_source))}};
  j["strategy"] = to_string(c.strategy);
  j["krum"] = {{"f", c.krum_f ? json(*c.krum_f) : json(nullptr)}};
  j["bandit"] = {{"alpha", c.bandit.alpha},
                 {"context_scaling", std::string(to_string(c.context_scaling))}};
  j["costs"] = {{"fedavg", c.costs.cost[0]}, {"median", c.costs.cost[1]}, {"krum", c.costs.cost[2]}};
  j["reward"] = {{"lambda_cost", c.reward.lambda_cost}};
  j["record_wall_time"] = c.record_wall_time;
  return j;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  ObjectReader root(j, "");
  root.read("schema_version", c.schema_version);
  root.read("label", c.label);
  root.read("seed", c.seed);
  root.read("num_clients", c.num_clients);
  root.read("num_malicious", c.num_malicious);
  root.read("rounds", c.rounds);
  root.read("record_wall_time", c.record_wall_time);

  with_object(root, "data", [&](ObjectReader& r) {
    r.read("num_classes", c.data.num_classes);
    r.read("num_features", c.data.num_features);
    r.read("samples_per_class", c.data.samples_per_class);
    r.read("class_separation", c.data.class_separation);
    r.read("holdout_fraction", c.data.holdout_fraction);
    r.read("test_fraction", c.data.test_fraction);
  });
  with_object(root, "partition", [&](ObjectReader& r) { r.read("beta", c.beta); });
  with_object(root, "model", [&](ObjectReader& r) { r.read("hidden", c.hidden); });
  with_object(root, "train", [&](ObjectReader& r) {
    r.read("learning_rate", c.train.learning_rate);
    r.read("momentum", c.train.momentum);
    r.read("epochs", c.train.epochs);
    r.read("batch_size", c.train.batch_size);
  });
  with_object(root, "attack", [&](ObjectReader& r) {
    std::string kind(to_string(c.attack.kind));
    r.read("kind", kind);
    auto k = parse_attack_kind(kind);
    if (!k) throw ConfigError("attack.kind", "expected none, standard or stealth");
    c.attack.kind = *k;
    r.read("scale_factor", c.attack.scale_factor);
    if (const json* flip = r.child("sign_flip"); flip && !flip->is_null()) {
      if (!flip->is_boolean()) throw ConfigError("attack.sign_flip", "expected a boolean or null");
      c.attack.sign_flip = flip->get<bool>();
    }
    std::string src(to_string(c.attack.norm_source));
    r.read("norm_source", src);
    auto s = parse_norm_source(src);
    if (!s) throw ConfigError("attack.norm_source", "expected oracle or self_estimate");
    c.attack.norm_source = *s;
  });
  if (const json* s = root.child("strategy")) {
    std::optional<Strategy> st;
    if (s->is_string()) st = parse_strategy(s->get<std::string>());
    else if (s->is_number_integer()) st = parse_strategy(std::to_string(s->get<int>()));
    if (!st) throw ConfigError("strategy", "expected adaptive, fedavg, median, krum or 0..2");
    c.strategy = *st;
  }
  with_object(root, "krum", [&](ObjectReader& r) {
    if (const json* f = r.child("f"); f && !f->is_null()) {
      if (!f->is_number_unsigned()) throw ConfigError("krum.f", "expected a non-negative integer or null");
      c.krum_f = f->get<std::size_t>();
    }
  });
  with_object(root, "bandit", [&](ObjectReader& r) {
    r.read("alpha", c.bandit.alpha);
    std::string scaling(to_string(c.context_scaling));
    r.read("context_scaling", scaling);
    auto m = parse_context_scaling(scaling);
    if (!m) throw ConfigError("bandit.context_scaling", "expected minmax or maxabs");
    c.context_scaling = *m;
  });
  with_object(root, "costs", [&](ObjectReader& r) {
    r.read("fedavg", c.costs.cost[0]);
    r.read("median", c.costs.cost[1]);
    r.read("krum", c.costs.cost[2]);
  });
  with_object(root, "reward", [&](ObjectReader& r) { r.read("lambda_cost", c.reward.lambda_cost); });
  root.finish();
  return c;
}

void set_dotted(nlohmann::json& j, const std::string& dotted_key, nlohmann::json value) {
  json* node = &j;
  std::stringstream ss(dotted_key);
  std::string part, walked;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError(dotted_key, "empty key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    walked += (walked.empty() ? "" : ".") + parts[i];
    if (!node->is_object()) throw ConfigError(walked, "not an object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError(dotted_key, "parent is not an object");
  (*node)[parts.back()] = std::move(value);
}

}  // namespace fedstrat
