#include "fedstrat/round_log.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fedstrat {
namespace {

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("rounds.csv line " + std::to_string(line) + ": bad number '" + s +
                             "'");
  return v;
}

}  // namespace

RunSummary summarize(const std::vector<RoundLog>& rows, const CostTable& costs) {
  RunSummary s;
  s.rounds = rows.size();
  if (rows.empty()) return s;
  s.final_accuracy = rows.back().test_accuracy;
  s.final_val_accuracy = rows.back().val_accuracy;

  const std::size_t tail = std::min<std::size_t>(10, rows.size());
  double mean = 0.0;
  for (std::size_t i = rows.size() - tail; i < rows.size(); ++i) mean += rows[i].test_accuracy;
  mean /= static_cast<double>(tail);
  double var = 0.0;
  for (std::size_t i = rows.size() - tail; i < rows.size(); ++i)
    var += (rows[i].test_accuracy - mean) * (rows[i].test_accuracy - mean);
  s.std_last10 = std::sqrt(var / static_cast<double>(tail));

  std::array<std::size_t, kNumRules> counts{};
  for (const auto& r : rows) ++counts[index_of(r.chosen_rule)];
  const double n = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < kNumRules; ++i) {
    s.selection_pct[i] = 100.0 * static_cast<double>(counts[i]) / n;
    s.mean_cost += static_cast<double>(counts[i]) * costs.cost[i];
  }
  s.mean_cost /= n;
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buf, ptr};
}

void write_rounds_csv(std::ostream& out, const std::vector<RoundLog>& rows) {
  out << kRoundsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.round << ',' << static_cast<int>(r.chosen_rule) << ','
        << format_double(r.state.norm_variance) << ','
        << format_double(r.state.avg_cosine_similarity) << ','
        << format_double(r.state.mean_update_norm);
    for (double v : r.scaled_state) out << ',' << format_double(v);
    out << ',' << format_double(r.val_accuracy) << ',' << format_double(r.test_accuracy) << ','
        << format_double(r.reward);
    for (std::size_t i = 0; i < 3; ++i) {
      out << ',';
      if (r.ucb_scores) out << format_double((*r.ucb_scores)[i]);
    }
    out << ',';
    if (r.wall_time_ms) out << format_double(*r.wall_time_ms);
    out << '\n';
  }
}

std::vector<RoundLog> read_rounds_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRoundsCsvHeader)
    throw std::runtime_error("rounds.csv: missing or unexpected header");

  std::vector<RoundLog> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 15)
      throw std::runtime_error("rounds.csv line " + std::to_string(lineno) + ": expected 15 columns, got " +
                               std::to_string(cells.size()));

    RoundLog r;
    r.round = static_cast<std::size_t>(parse_double(cells[0], lineno));
    auto rule = parse_rule(cells[1]);
    if (!rule)
      throw std::runtime_error("rounds.csv line " + std::to_string(lineno) + ": bad chosen_rule");
    r.chosen_rule = *rule;
    r.state = {parse_double(cells[2], lineno), parse_double(cells[3], lineno),
               parse_double(cells[4], lineno)};
    for (std::size_t i = 0; i < 3; ++i) r.scaled_state[i] = parse_double(cells[5 + i], lineno);
    r.val_accuracy = parse_double(cells[8], lineno);
    r.test_accuracy = parse_double(cells[9], lineno);
    r.reward = parse_double(cells[10], lineno);
    if (!cells[11].empty()) {
      r.ucb_scores = std::array<double, 3>{parse_double(cells[11], lineno),
                                           parse_double(cells[12], lineno),
                                           parse_double(cells[13], lineno)};
    }
    if (!cells[14].empty()) r.wall_time_ms = parse_double(cells[14], lineno);
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json pct;
  for (RuleId r : kAllRules) pct[std::string(to_string(r))] = s.selection_pct[index_of(r)];
  return {{"rounds", s.rounds},
          {"final_accuracy", s.final_accuracy},
          {"final_val_accuracy", s.final_val_accuracy},
          {"std_last10", s.std_last10},
          {"selection_pct", pct},
          {"mean_cost", s.mean_cost}};
}

}  // namespace fedstrat
