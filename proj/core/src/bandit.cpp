#include "fedstrat/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedstrat/vec.hpp"

namespace fedstrat {
namespace {

// Square-root-free Cholesky: A = L D L^T with unit lower-triangular L.
struct Ldl {
  std::size_t n;
  std::vector<double> l;  // row-major, unit diagonal implied
  std::vector<double> d;
};

Ldl factor(std::span<const double> a, std::size_t n) {
  Ldl f{n, std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    double dj = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) dj -= f.l[j * n + k] * f.l[j * n + k] * f.d[k];
    if (!(dj > 0.0)) throw std::runtime_error("LinUCB: arm matrix is not positive definite");
    f.d[j] = dj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= f.l[i * n + k] * f.l[j * n + k] * f.d[k];
      f.l[i * n + j] = s / dj;
    }
  }
  return f;
}

// Solves L y = rhs.
std::vector<double> forward_subst(const Ldl& f, std::span<const double> rhs) {
  std::vector<double> y(f.n);
  for (std::size_t i = 0; i < f.n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= f.l[i * f.n + k] * y[k];
    y[i] = s;
  }
  return y;
}

// Solves A x = rhs.
std::vector<double> solve(const Ldl& f, std::span<const double> rhs) {
  auto x = forward_subst(f, rhs);
  for (std::size_t i = 0; i < f.n; ++i) x[i] /= f.d[i];
  for (std::size_t i = f.n; i-- > 0;)
    for (std::size_t k = i + 1; k < f.n; ++k) x[i] -= f.l[k * f.n + i] * x[k];
  return x;
}

void check_dim(std::span<const double> x, std::size_t dim) {
  if (x.size() != dim) throw std::invalid_argument("LinUCB: context dimension mismatch");
}

}  // namespace

ArmState::ArmState(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0), b_(dim, 0.0) {
  for (std::size_t i = 0; i < dim; ++i) a_[i * dim + i] = 1.0;
}

void ArmState::update(std::span<const double> x, double reward) {
  check_dim(x, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) a_[i * dim_ + j] += x[i] * x[j];
    b_[i] += reward * x[i];
  }
  ++pulls_;
}

std::vector<double> ArmState::theta() const {
  return solve(factor(a_, dim_), b_);
}

double ArmState::ucb(std::span<const double> x, double alpha) const {
  check_dim(x, dim_);
  const auto f = factor(a_, dim_);
  // x^T A^-1 x = z^T D^-1 z with z = L^-1 x
  const auto z = forward_subst(f, x);
  double quad = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) quad += z[i] * z[i] / f.d[i];
  return dot(x, solve(f, b_)) + alpha * std::sqrt(quad);
}

ArmState update_arm(ArmState arm, std::span<const double> x, double reward) {
  arm.update(x, reward);
  return arm;
}

ArmSelection select_arm(std::span<const ArmState> arms, std::span<const double> x,
                        const BanditConfig& cfg, std::uint64_t round) {
  if (arms.empty()) throw std::invalid_argument("select_arm: no arms");
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("select_arm: non-finite context");

  ArmSelection sel;
  sel.scores.reserve(arms.size());
  for (const auto& arm : arms) sel.scores.push_back(arm.ucb(x, cfg.alpha));

  const double best = *std::max_element(sel.scores.begin(), sel.scores.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> tied;
  for (std::size_t a = 0; a < sel.scores.size(); ++a)
    if (sel.scores[a] >= best - tol) tied.push_back(a);
  sel.arm = tied[round % tied.size()];
  return sel;
}

double compute_reward(double acc_t, double acc_prev, RuleId rule, const CostTable& costs,
                      const RewardParams& params) noexcept {
  return (acc_t - acc_prev) - params.lambda_cost * costs[rule];
}

LinUcbAgent::LinUcbAgent(BanditConfig cfg)
    : cfg_(cfg), arms_(cfg.num_arms, ArmState(cfg.context_dim)) {
  if (cfg.alpha < 0.0) throw std::invalid_argument("LinUCB: alpha must be >= 0");
  if (cfg.num_arms == 0) throw std::invalid_argument("LinUCB: need at least one arm");
}

ArmSelection LinUcbAgent::select(std::span<const double> x) {
  auto sel = select_arm(arms_, x, cfg_, round_);
  ++round_;
  return sel;
}

void LinUcbAgent::update(std::size_t arm, std::span<const double> x, double reward) {
  arms_.at(arm).update(x, reward);
}

}  // namespace fedstrat
