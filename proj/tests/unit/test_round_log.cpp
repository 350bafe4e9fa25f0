#include <sstream>

#include "doctest.h"
#include "fedstrat/round_log.hpp"

using namespace fedstrat;

namespace {

RoundLog row(std::size_t t, RuleId r, double acc, bool adaptive) {
  RoundLog l;
  l.round = t;
  l.chosen_rule = r;
  l.state = {0.1 * t, -0.25, 1.0 / 3.0};
  l.scaled_state = {0.5, 0.0, 1.0};
  l.val_accuracy = acc;
  l.test_accuracy = acc + 0.01;
  l.reward = -0.123456789012345678;
  if (adaptive) l.ucb_scores = std::array<double, 3>{1.5, 0.1 + 0.2, -2e-300};
  return l;
}

}  // namespace

TEST_CASE("header is the versioned schema") {
  std::ostringstream os;
  write_rounds_csv(os, {});
  CHECK(os.str() ==
        "round,chosen_rule,norm_variance,avg_cos_sim,mean_update_norm,scaled_s1,scaled_s2,"
        "scaled_s3,val_accuracy,test_accuracy,reward,ucb_fedavg,ucb_median,ucb_krum,wall_time_ms\n");
}

TEST_CASE("CSV round-trips exactly") {
  std::vector<RoundLog> rows{row(0, RuleId::kFedAvg, 0.1, true), row(1, RuleId::kKrum, 0.7, true)};
  rows[1].wall_time_ms = 12.5;
  std::ostringstream os;
  write_rounds_csv(os, rows);
  std::istringstream in(os.str());
  const auto back = read_rounds_csv(in);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].round == rows[i].round);
    CHECK(back[i].chosen_rule == rows[i].chosen_rule);
    CHECK(back[i].state.as_array() == rows[i].state.as_array());
    CHECK(back[i].scaled_state == rows[i].scaled_state);
    CHECK(back[i].reward == rows[i].reward);
    CHECK(back[i].ucb_scores == rows[i].ucb_scores);
    CHECK(back[i].wall_time_ms == rows[i].wall_time_ms);
  }
  std::ostringstream again;
  write_rounds_csv(again, back);
  CHECK(again.str() == os.str());
}

TEST_CASE("static rows leave the optional columns blank") {
  std::ostringstream os;
  write_rounds_csv(os, {row(0, RuleId::kMedian, 0.5, false)});
  const auto text = os.str();
  const auto line = text.substr(text.find('\n') + 1);
  CHECK(line.substr(0, 2) == "0,");
  CHECK(line.find(",,,,\n") != std::string::npos);
}

TEST_CASE("corrupt CSV is rejected") {
  std::istringstream bad_header("round,rule\n");
  CHECK_THROWS(read_rounds_csv(bad_header));
  std::istringstream bad_row(std::string(kRoundsCsvHeader) + "\n0,1,2\n");
  CHECK_THROWS(read_rounds_csv(bad_row));
  std::istringstream bad_number(std::string(kRoundsCsvHeader) + "\n0,1,x,0,0,0,0,0,0,0,0,,,,\n");
  CHECK_THROWS(read_rounds_csv(bad_number));
}

TEST_CASE("summarize") {
  std::vector<RoundLog> rows;
  for (std::size_t t = 0; t < 20; ++t)
    rows.push_back(row(t, t < 10 ? RuleId::kFedAvg : (t % 2 ? RuleId::kMedian : RuleId::kKrum),
                       t < 10 ? 0.2 : 0.5 + 0.01 * (t % 2), true));
  const auto s = summarize(rows, CostTable{});
  CHECK(s.rounds == 20);
  CHECK(s.selection_pct == std::array<double, 3>{50.0, 25.0, 25.0});
  CHECK(s.mean_cost == doctest::Approx((10 * 0.1 + 5 * 0.4 + 5 * 0.8) / 20));
  CHECK(s.final_accuracy == doctest::Approx(0.52));
  CHECK(s.std_last10 == doctest::Approx(0.005));

  const auto j = to_json(s);
  CHECK(j.contains("final_accuracy"));
  CHECK(j.contains("std_last10"));
  CHECK(j["selection_pct"]["Krum"] == 25.0);
}

TEST_CASE("all-FedAvg mean cost is exactly the FedAvg cost") {
  std::vector<RoundLog> rows;
  for (std::size_t t = 0; t < 50; ++t) rows.push_back(row(t, RuleId::kFedAvg, 0.5, false));
  CHECK(summarize(rows, CostTable{}).mean_cost == 0.1);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
  CHECK(format_double(100.0) == "100");
  CHECK(format_double(-2e-300) == "-2e-300");
}
