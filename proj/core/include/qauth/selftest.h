#ifndef QAUTH_SELFTEST_H
#define QAUTH_SELFTEST_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qauth {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestSummary {
  std::vector<SelftestCheck> checks;

  bool all_passed() const;
  size_t failures() const;
};

/// Inputs the self-test can be pointed at instead of the built-in ones.
struct SelftestFixture {
  /// Rows ('0'/'1' strings) spanning the self-dual code behind the [[7,1]]
  /// golden; defaults to the first-order Reed–Muller code of length 8.
  std::optional<std::vector<std::string>> steane_generator;
  uint64_t seed = 20240601;
};

/// Fast invariant suite: conjugation round trips, commutation preservation,
/// the twirl identity, the classification partition, the [[7,1]] code
/// goldens, encoder correctness and the trap probe characterization.
/// Deterministic for a given fixture; each failure is reported by name.
SelftestSummary run_selftest(const SelftestFixture& fixture = {});

}  // namespace qauth

#endif  // QAUTH_SELFTEST_H
