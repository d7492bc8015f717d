#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace advcsp {

struct SuiteReport {
  std::string suite;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;  // empty when every check passed

  bool passed() const { return failures == 0; }
};

/// instance, advice, lp, qp, maxcut-lemmas, twolin, max3lin, enumeration, reduction.
const std::vector<std::string>& suite_names();

/// Runs one invariant suite over `seeds` random cases derived from `master`.
/// Throws InputError for an unknown suite name.
SuiteReport run_suite(const std::string& name, std::size_t seeds, std::uint64_t master);

}  // namespace advcsp
