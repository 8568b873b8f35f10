#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cmv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool soft = false;       // reported, never fatal
  double measured = 0.0;   // worst observed value of the pinned metric
  double tolerance = 0.0;  // pass threshold for `measured`
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;
  int theta_count = 1024;  // circle grid for spectrum approximations
  bool include_soft = true;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  std::string m_minus_convention;

  [[nodiscard]] bool hard_passed() const;
  [[nodiscard]] bool all_passed() const;
};

inline constexpr int kCriterionCount = 13;

/// Runs one criterion (1 .. 13); `convention` receives the resolved M- rule
/// when the criterion resolves it.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt, std::string* convention = nullptr);

/// Runs all criteria in order, calling `on_result` after each one.
AcceptanceReport run_acceptance(const AcceptanceOptions& opt,
                                const std::function<void(const CriterionResult&)>& on_result = {});

/// One line per criterion: "PASS  3 corner-trace identity  measured=... tol=...".
std::string format_line(const CriterionResult& r);
void write_report_json(std::ostream& os, const AcceptanceReport& report);

}  // namespace cmv
