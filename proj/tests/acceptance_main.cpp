#include "rieff/acceptance.hpp"

#include <iostream>

int main() {
  rieff::AcceptanceConfig cfg;
  std::cout << "acceptance suite, seed " << cfg.seed << "\n";
  const auto results = rieff::run_acceptance(cfg, [](const rieff::CriterionResult& r) {
    std::cout << rieff::format_result(r) << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
