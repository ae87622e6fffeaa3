#pragma once

#include "mahler/body.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mahler::lab {

struct SuiteParams {
  std::optional<std::size_t> n;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<double> p;      // sections-lp exponents
  std::vector<double> alpha;  // embedding exponents
  std::string action = "4";   // reduction-bound constant A
};

struct SuiteResult {
  std::string suite;
  json cases = json::array();
  std::size_t passed = 0;
  std::size_t failed = 0;

  bool ok() const { return failed == 0; }
  void add(json c, bool pass);
  json to_json() const;
};

/// Known suite names, aliases included.
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for unknown suites.
SuiteResult run_suite(const std::string& name, const SuiteParams& params);

/// Nonzero vector with entries k/d, |k| <= 6, 1 <= d <= 3.
QVector random_rational_normal(std::size_t n, std::mt19937_64& rng);

}  // namespace mahler::lab
