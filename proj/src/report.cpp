#include "isogeo/report.hpp"

#include "isogeo/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <sstream>
#include <tuple>

namespace isogeo {

namespace {

const char* kTimestampKey = "timestamp_excluded_from_hash";

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

// JSON has no inf/nan; those go out as strings.
std::string json_real(const std::optional<double>& x) {
  if (!x) return "\"exact\"";
  if (!std::isfinite(*x)) return json_string(format_real(*x));
  return format_real(*x);
}

std::optional<double> real_from_text(const std::string& s) {
  if (s == "exact") return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError("report: bad real field '" + s + "'");
  return v;
}

std::optional<double> real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return real_from_text(j.get<std::string>());
  throw UsageError("report: residual/tolerance must be a number or string");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_real(const std::optional<double>& x) { return x ? format_real(*x) : "exact"; }

std::vector<std::vector<std::string>> csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw UsageError("report: unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

} // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CheckResult numeric_check(std::string name, std::string instance, double residual, double tol,
                          std::string witness) {
  CheckResult r{std::move(name), std::move(instance), residual, tol, false, std::move(witness)};
  r.pass = residual <= tol;
  return r;
}

CheckResult exact_check(std::string name, std::string instance, bool pass, std::string witness) {
  return {std::move(name), std::move(instance), std::nullopt, std::nullopt, pass, std::move(witness)};
}

bool operator==(const CheckResult& a, const CheckResult& b) {
  auto same = [](const std::optional<double>& x, const std::optional<double>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return (std::isnan(*x) && std::isnan(*y)) || *x == *y;
  };
  return a.name == b.name && a.instance == b.instance && same(a.max_residual, b.max_residual) &&
         same(a.tolerance, b.tolerance) && a.pass == b.pass && a.witness == b.witness;
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw UsageError("unknown report format '" + s + "' (expected json or csv)");
}

std::string emit(std::vector<CheckResult> results, ReportFormat fmt, const ReportMeta& meta) {
  if (results.empty()) throw UsageError("emit: no results");
  std::stable_sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
    return std::tie(a.name, a.instance) < std::tie(b.name, b.instance);
  });
  std::ostringstream out;
  if (fmt == ReportFormat::csv) {
    out << "name,instance,max_residual,tolerance,pass\r\n";
    for (const auto& r : results)
      out << csv_field(r.name) << ',' << csv_field(r.instance) << ',' << csv_real(r.max_residual) << ','
          << csv_real(r.tolerance) << ',' << (r.pass ? "true" : "false") << "\r\n";
    return out.str();
  }
  // One check per line and the timestamp on a line of its own, so reports
  // diff cleanly and the timestamp can be dropped by line.
  out << "{\n";
  out << "  \"version\": " << json_string(meta.version) << ",\n";
  out << "  \"seed\": " << meta.seed << ",\n";
  out << "  \"" << kTimestampKey << "\": "
      << json_string(meta.timestamp.empty() ? utc_timestamp() : meta.timestamp) << ",\n";
  out << "  \"checks\": [";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << (i ? ",\n" : "\n") << "    {\"name\": " << json_string(r.name)
        << ", \"instance\": " << json_string(r.instance) << ", \"max_residual\": " << json_real(r.max_residual)
        << ", \"tolerance\": " << json_real(r.tolerance) << ", \"pass\": " << (r.pass ? "true" : "false");
    if (!r.witness.empty()) out << ", \"witness\": " << json_string(r.witness);
    out << "}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

std::vector<CheckResult> parse_json_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("report: ") + e.what());
  }
  if (!j.contains("checks") || !j["checks"].is_array()) throw UsageError("report: missing checks array");
  std::vector<CheckResult> out;
  for (const auto& c : j["checks"]) {
    CheckResult r;
    r.name = c.at("name").get<std::string>();
    r.instance = c.value("instance", std::string{});
    r.max_residual = c.contains("max_residual") ? real_from_json(c["max_residual"]) : std::nullopt;
    r.tolerance = c.contains("tolerance") ? real_from_json(c["tolerance"]) : std::nullopt;
    r.pass = c.at("pass").get<bool>();
    r.witness = c.value("witness", std::string{});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> parse_csv_report(const std::string& text) {
  auto rows = csv_records(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"name", "instance", "max_residual", "tolerance", "pass"})
    throw UsageError("report: bad CSV header");
  std::vector<CheckResult> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 5) throw UsageError("report: CSV row " + std::to_string(i) + " has " +
                                        std::to_string(f.size()) + " fields");
    if (f[4] != "true" && f[4] != "false") throw UsageError("report: bad pass field '" + f[4] + "'");
    out.push_back({f[0], f[1], real_from_text(f[2]), real_from_text(f[3]), f[4] == "true", {}});
  }
  return out;
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  const std::string key = std::string("\"") + kTimestampKey + "\"";
  while (std::getline(in, line))
    if (line.find(key) == std::string::npos) out += line + '\n';
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

} // namespace isogeo
