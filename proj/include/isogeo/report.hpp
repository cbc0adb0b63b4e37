#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isogeo {

struct CheckResult {
  std::string name;
  std::string instance;
  // nullopt means "exact".
  std::optional<double> max_residual;
  std::optional<double> tolerance;
  bool pass = false;
  std::string witness;

  bool exact() const { return !max_residual.has_value(); }
};

// pass = residual <= tol; NaN never passes.
CheckResult numeric_check(std::string name, std::string instance, double residual, double tol,
                          std::string witness = {});
CheckResult exact_check(std::string name, std::string instance, bool pass, std::string witness = {});

bool operator==(const CheckResult& a, const CheckResult& b);

enum class ReportFormat { json, csv };
ReportFormat parse_report_format(const std::string& s);

struct ReportMeta {
  std::string version = "1.0";
  std::uint64_t seed = 0;
  std::string timestamp;  // empty: current UTC time
};

// Sorted by (name, instance), stable otherwise. Throws UsageError on empty input.
std::string emit(std::vector<CheckResult> results, ReportFormat fmt, const ReportMeta& meta = {});

std::vector<CheckResult> parse_json_report(const std::string& text);
std::vector<CheckResult> parse_csv_report(const std::string& text);

// Report text with the timestamp line removed.
std::string without_timestamp(const std::string& text);

bool all_pass(const std::vector<CheckResult>& results);

std::string format_real(double x);
std::string utc_timestamp();

} // namespace isogeo
