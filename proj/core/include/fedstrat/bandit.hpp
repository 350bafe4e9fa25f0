#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedstrat/aggregation.hpp"

namespace fedstrat {

/// Disjoint LinUCB statistics for one arm: A = I + sum x x^T, b = sum r x.
/// A is kept as a dense row-major d x d matrix.
class ArmState {
 public:
  explicit ArmState(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> A() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }
  std::size_t pulls() const noexcept { return pulls_; }

  /// Rank-one update A += x x^T, b += r x.
  void update(std::span<const double> x, double reward);

  /// Ridge estimate theta = A^-1 b.
  std::vector<double> theta() const;

  /// x^T theta + alpha * sqrt(x^T A^-1 x).
  double ucb(std::span<const double> x, double alpha) const;

 private:
  std::size_t dim_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::size_t pulls_ = 0;
};

/// Returns `arm` after the rank-one update.
ArmState update_arm(ArmState arm, std::span<const double> x, double reward);

struct BanditConfig {
  double alpha = 1.5;
  std::size_t num_arms = kNumRules;
  std::size_t context_dim = 3;
};

struct ArmSelection {
  std::size_t arm = 0;
  std::vector<double> scores;
};

/// Scores every arm and returns the UCB maximizer. Ties (within a relative
/// 1e-12) rotate through the tied arms by `round`, so round 0 picks the
/// lowest tied index. Throws std::runtime_error if some A is not positive
/// definite.
ArmSelection select_arm(std::span<const ArmState> arms, std::span<const double> x,
                        const BanditConfig& cfg, std::uint64_t round);

/// Heuristic defense cost per rule, indexed by RuleId.
struct CostTable {
  std::array<double, kNumRules> cost = {0.1, 0.4, 0.8};

  double operator[](RuleId r) const noexcept { return cost[index_of(r)]; }
};

struct RewardParams {
  double lambda_cost = 0.5;
};

/// (acc_t - acc_prev) - lambda_cost * cost(rule).
double compute_reward(double acc_t, double acc_prev, RuleId rule, const CostTable& costs,
                      const RewardParams& params) noexcept;

/// The rule-selection agent: one ArmState per rule plus the round counter
/// used for tie-breaking. Single-writer.
class LinUcbAgent {
 public:
  explicit LinUcbAgent(BanditConfig cfg);

  ArmSelection select(std::span<const double> x);
  void update(std::size_t arm, std::span<const double> x, double reward);

  const BanditConfig& config() const noexcept { return cfg_; }
  std::span<const ArmState> arms() const noexcept { return arms_; }
  std::uint64_t rounds() const noexcept { return round_; }

 private:
  BanditConfig cfg_;
  std::vector<ArmState> arms_;
  std::uint64_t round_ = 0;
};

}  // namespace fedstrat
