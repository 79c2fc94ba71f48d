#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "modefisher/collective.hpp"
#include "modefisher/fock.hpp"
#include "modefisher/metrology.hpp"
#include "modefisher/mode_frame.hpp"
#include "modefisher/qfi.hpp"
#include "modefisher/separability.hpp"

namespace modefisher {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "modefisher-report/1";

// Malformed documents throw std::invalid_argument.

/// Raised by read_json_file for text that is not JSON at all.
class MalformedJsonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ModeFrame frame_from_json(const json& j);
json frame_to_json(const ModeFrame& frame);

SectorState state_from_json(const json& j);
json state_to_json(const SectorState& state);

CollectiveObservable observable_from_json(const json& j);

// Non-finite values become null.
json number_or_null(double x);

json report_to_json(const QfiReport& report);
json verdict_to_json(const SeparabilityVerdict& verdict);
json run_to_json(const EstimationRun& run);

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// Parse "nx,ny,nz".
Direction parse_direction(const std::string& text);

json read_json_file(const std::string& path);

}  // namespace modefisher
