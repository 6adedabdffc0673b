#pragma once

// Named verification suites with machine-readable reports.

#include <cstdint>
#include <string>
#include <vector>

#include "dfx/expr.hpp"

namespace dfx {

inline constexpr const char* kEngineVersion = "0.1.0";

struct CheckRecord {
  std::string id;
  std::string anchor;    // what mathematical statement the check verifies
  std::string status;    // "pass" | "fail" | "inconclusive"
  bool exact = true;     // false when a randomized numeric fallback decided
  std::string residual;  // serialized residual / norm when not passing cleanly
  double wall_ms = 0.0;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckRecord> records;
  std::string engine_version = kEngineVersion;
  uint64_t seed = 0;

  bool all_pass() const {
    for (const auto& r : records)
      if (r.status != "pass") return false;
    return true;
  }
};

struct SuiteConfig {
  uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  std::string theta = "1";
  std::string xi = "0";
  Rational c0 = 0;
  bool include_r4 = true;
  std::vector<int> grid_sizes = {51, 101, 201};
  int kernel_samples = 1000;
};

// name in {kernel, symmetry, cosymmetry, conservation, hamiltonian, recursion,
// solutions, all}
VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg);
std::vector<std::string> suite_names();

std::string report_to_json(const VerificationReport& rep);
std::string report_to_text(const VerificationReport& rep);

// random expression over jet atoms, used by the kernel property checks
Expr random_expression(std::mt19937_64& rng, int depth, bool with_symbols = false);

}  // namespace dfx
