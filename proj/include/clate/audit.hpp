#pragma once

#include "clate/compare.hpp"
#include "clate/dataset.hpp"
#include "clate/json_io.hpp"
#include "clate/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clate {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Vacuous, Skipped, Underpowered };

std::string_view to_string(CheckStatus s);
CheckStatus parse_check_status(std::string_view text);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  Json witnesses = Json::array();
  Json values = Json::object();
  /// Present for sample checks: the comparison rule that was applied.
  std::optional<Json> tolerance;
  std::string reason;

  bool operator==(const CheckResult&) const = default;
};

struct AuditReport {
  std::string toolkit_version{kToolkitVersion};
  std::string input_digest;
  /// "population" or "sample".
  std::string input_kind;
  std::vector<CheckResult> checks;
  std::string verdict;
  std::vector<std::string> notes;

  bool passed() const { return verdict == "pass"; }
  const CheckResult* find(std::string_view name) const;

  bool operator==(const AuditReport&) const = default;
};

struct AuditOptions {
  /// Covariate label whose propensity column anchors the index (binary only).
  std::optional<std::string> anchor;
  SampleTolerance tolerance;
};

/// Population audit of an unfactored law; independence and monotonicity are
/// read off the response types, the rest from the observables.
AuditReport audit(const JointLaw& joint, const AuditOptions& options = {}, std::string digest = {});
AuditReport audit(const FiniteModel& model, const AuditOptions& options = {}, std::string digest = {});
/// Sample audit: only observable implications run, compared with the sample tolerance.
AuditReport audit(const Dataset& data, const AuditOptions& options = {}, std::string digest = {});

Json report_to_json(const AuditReport& report);
AuditReport report_from_json(const Json& j);

}  // namespace clate
