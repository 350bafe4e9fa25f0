#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fedstrat/aggregation.hpp"
#include "fedstrat/bandit.hpp"
#include "fedstrat/diagnostics.hpp"

namespace fedstrat {

/// One row of the experiment ledger.
struct RoundLog {
  std::size_t round = 0;
  RuleId chosen_rule = RuleId::kFedAvg;
  StateVector state;
  std::array<double, 3> scaled_state{};
  double val_accuracy = 0.0;   // proxy set; drives the reward
  double test_accuracy = 0.0;  // disjoint reporting split
  double reward = 0.0;
  std::optional<std::array<double, 3>> ucb_scores;  // adaptive runs only
  std::optional<double> wall_time_ms;               // only when timing is enabled
};

/// Aggregate statistics of a run.
struct RunSummary {
  std::size_t rounds = 0;
  double final_accuracy = 0.0;      // test accuracy after the last round
  double final_val_accuracy = 0.0;
  double std_last10 = 0.0;          // population std-dev of test accuracy, last 10 rounds
  std::array<double, kNumRules> selection_pct{};  // percent of rounds per rule
  double mean_cost = 0.0;           // mean heuristic cost of the chosen rules
};

RunSummary summarize(const std::vector<RoundLog>& rows, const CostTable& costs);

inline constexpr std::string_view kRoundsCsvHeader =
    "round,chosen_rule,norm_variance,avg_cos_sim,mean_update_norm,scaled_s1,scaled_s2,"
    "scaled_s3,val_accuracy,test_accuracy,reward,ucb_fedavg,ucb_median,ucb_krum,wall_time_ms";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Writes the header line and one line per row. Optional columns are empty
/// when absent.
void write_rounds_csv(std::ostream& out, const std::vector<RoundLog>& rows);

/// Parses a rounds.csv stream. Throws std::runtime_error on a header
/// mismatch or malformed line.
std::vector<RoundLog> read_rounds_csv(std::istream& in);

nlohmann::json to_json(const RunSummary& s);

}  // namespace fedstrat
