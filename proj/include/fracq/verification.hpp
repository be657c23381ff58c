#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracq::verify {

struct SuiteConfig {
  std::uint64_t seed = 7;
  int d = 32;                    ///< dimension of the randomized operator suites
  std::optional<double> alpha;   ///< replaces the default order sweep when set
  int nmax = 6;                  ///< highest monomial degree in the identity tables
};

struct SuiteReport {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double allowed = 0.0;
  double runtime_ms = 0.0;
  std::vector<std::string> details;
};

/// Names accepted by run_suite, in execution order.
const std::vector<std::string>& suite_names();

/// Runs one suite. Throws Error(invalid_argument) for an unknown name.
SuiteReport run_suite(std::string_view name, const SuiteConfig& cfg);

/// "all" runs every suite, "none" runs nothing, anything else a single suite.
std::vector<SuiteReport> run_suites(std::string_view selector, const SuiteConfig& cfg);

}  // namespace fracq::verify
