#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modefisher::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;

/// Entry point shared by the executable and the tests.  `args` excludes the
/// program name.  Reports go to `out`; on validation errors a JSON error
/// object is written to `out` and 2 is returned.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modefisher::cli
