#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fedstrat/model.hpp"
#include "oracles.hpp"

namespace testing {

// Hand-rolled generators for property tests. Every property test loops over
// a fixed seed range so failures are reproducible by seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  std::vector<double> vec(std::size_t d, double scale = 1.0) {
    std::vector<double> v(d);
    for (auto& x : v) x = scale * normal();
    return v;
  }

  std::vector<fedstrat::UpdateVector> updates(std::size_t n, std::size_t d, double scale = 1.0) {
    std::vector<fedstrat::UpdateVector> out(n);
    for (auto& u : out) u.delta = vec(d, scale);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline oracle::Matrix as_matrix(const std::vector<fedstrat::UpdateVector>& us) {
  oracle::Matrix m;
  for (const auto& u : us) m.push_back(u.delta);
  return m;
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fedstrat_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
