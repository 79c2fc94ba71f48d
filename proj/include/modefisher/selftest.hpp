#pragma once

#include <string>
#include <vector>

namespace modefisher {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;
  int passed() const;
  int failed() const;
};

/// Quick pass over the library invariants (su(2) algebra, closed form vs
/// spectral QFI, frame invariance, separability witnesses, locality).
SelftestResult run_selftest();

}  // namespace modefisher
