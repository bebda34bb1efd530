#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rieff {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// RIEFF_SEED if set and numeric, otherwise a fixed default.
std::uint64_t seed_from_env();

struct AcceptanceConfig {
  std::uint64_t seed = seed_from_env();
  int welge_triples = 20;
  int property_states = 24;
  int jacobian_states = 1000;
};

/// Runs criteria 1..9 in order; on_result is called as each one finishes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceConfig& cfg = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  lifting identity  (0.12 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace rieff
