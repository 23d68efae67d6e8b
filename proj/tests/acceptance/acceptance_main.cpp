// Acceptance suite: runs every verification criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <cstdio>
#include <iostream>

#include "gradfit/verification.hpp"

int main() {
  const auto results = gradfit::run_verification(std::cout);
  int failed = 0;
  for (const auto& res : results) {
    if (!res.passed) ++failed;
  }
  if (failed == 0) {
    std::cout << "all " << results.size() << " criteria passed\n";
    return 0;
  }
  std::cout << failed << " of " << results.size() << " criteria failed\n";
  return 1;
}
