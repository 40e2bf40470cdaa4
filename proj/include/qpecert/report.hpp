#pragma once

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qpecert/analytic.hpp"
#include "qpecert/checks.hpp"
#include "qpecert/config.hpp"

namespace qpecert {

// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"t_max", c.t_max},
                     {"s_values", c.s_values},
                     {"phase_kind", to_string(c.phase_kind)},
                     {"seed", c.seed},
                     {"strict_margin", c.strict_margin},
                     {"unitarity_tol", c.unitarity_tol},
                     {"elementwise_tol", c.elementwise_tol},
                     {"include", c.include},
                     {"exclude", c.exclude},
                     {"out", c.out_path},
                     {"format", to_string(c.format)},
                     {"workers", c.workers}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
  j.at("t_max").get_to(c.t_max);
  j.at("s_values").get_to(c.s_values);
  c.phase_kind = parse_phase_kind(j.at("phase_kind").get<std::string>());
  j.at("seed").get_to(c.seed);
  j.at("strict_margin").get_to(c.strict_margin);
  j.at("unitarity_tol").get_to(c.unitarity_tol);
  j.at("elementwise_tol").get_to(c.elementwise_tol);
  j.at("include").get_to(c.include);
  j.at("exclude").get_to(c.exclude);
  j.at("out").get_to(c.out_path);
  c.format = parse_output_format(j.at("format").get<std::string>());
  j.at("workers").get_to(c.workers);
}

inline void to_json(nlohmann::json& j, const CheckResult& r) {
  j = nlohmann::json{{"name", r.name},
                     {"status", to_string(r.status)},
                     {"instances", r.instances},
                     {"worst_margin", r.worst_margin},
                     {"elapsed_ms", r.elapsed_ms}};
  if (r.failing_params)
    j["failing_params"] = *r.failing_params;
  else
    j["failing_params"] = nullptr;
}

inline void from_json(const nlohmann::json& j, CheckResult& r) {
  j.at("name").get_to(r.name);
  const std::string status = j.at("status").get<std::string>();
  if (status == "pass")
    r.status = CheckStatus::pass;
  else if (status == "fail")
    r.status = CheckStatus::fail;
  else if (status == "skipped")
    r.status = CheckStatus::skipped;
  else
    throw config_error("unknown result status: " + status);
  j.at("instances").get_to(r.instances);
  j.at("worst_margin").get_to(r.worst_margin);
  j.at("elapsed_ms").get_to(r.elapsed_ms);
  if (j.at("failing_params").is_null())
    r.failing_params.reset();
  else
    r.failing_params = j.at("failing_params").get<std::string>();
}

inline void to_json(nlohmann::json& j, const CheckReport& report) {
  j = nlohmann::json{{"version", report.version},
                     {"seed", report.seed},
                     {"config", report.config},
                     {"timestamp", report.timestamp},
                     {"results", report.results}};
}

inline void from_json(const nlohmann::json& j, CheckReport& report) {
  j.at("version").get_to(report.version);
  j.at("seed").get_to(report.seed);
  j.at("config").get_to(report.config);
  j.at("timestamp").get_to(report.timestamp);
  j.at("results").get_to(report.results);
}

inline std::string report_to_json(const CheckReport& report, int indent = 2) {
  return nlohmann::json(report).dump(indent) + "\n";
}

inline CheckReport report_from_json(const std::string& text) {
  return nlohmann::json::parse(text).get<CheckReport>();
}

// Report content with wall-clock fields (timestamp, per-check elapsed)
// removed; equal (config, seed) must give bit-identical canonical forms.
inline std::string report_canonical_json(const CheckReport& report) {
  nlohmann::json j(report);
  j.erase("timestamp");
  for (nlohmann::json& r : j["results"]) r.erase("elapsed_ms");
  return j.dump(2) + "\n";
}

inline std::string escape_csv(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string report_to_csv(const CheckReport& report) {
  std::string out = "name,status,instances,worst_margin,failing_params,elapsed_ms\r\n";
  for (const CheckResult& r : report.results) {
    out += r.name;
    out += ',';
    out += to_string(r.status);
    out += ',';
    out += std::to_string(r.instances);
    out += ',';
    out += format_double(r.worst_margin);
    out += ',';
    out += escape_csv(r.failing_params.value_or(""));
    out += ',';
    out += format_double(r.elapsed_ms);
    out += "\r\n";
  }
  return out;
}

inline std::string report_to_text(const CheckReport& report) {
  std::ostringstream out;
  out << "verification report (seed " << report.seed << ", " << report.timestamp << ")\n";
  std::size_t width = 4;
  for (const CheckResult& r : report.results) width = std::max(width, r.name.size());
  int passed = 0, failed = 0, skipped = 0;
  for (const CheckResult& r : report.results) {
    out << "  " << r.name << std::string(width - r.name.size() + 2, ' ');
    switch (r.status) {
      case CheckStatus::pass:
        ++passed;
        out << "pass     margin " << format_double(r.worst_margin) << "  (" << r.instances
            << " instances, " << format_double(r.elapsed_ms) << " ms)";
        break;
      case CheckStatus::fail:
        ++failed;
        out << "FAIL     " << r.failing_params.value_or("");
        break;
      case CheckStatus::skipped:
        ++skipped;
        out << "skipped  " << r.failing_params.value_or("");
        break;
    }
    out << "\n";
  }
  out << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return out.str();
}

inline std::string render_report(const CheckReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: return report_to_json(report);
    case OutputFormat::csv: return report_to_csv(report);
    case OutputFormat::text: return report_to_text(report);
  }
  return report_to_json(report);
}

// Failure-bound comparison table: the tight bound against the textbook
// bound, one row per e. RFC 4180 lines; the original-bound field is blank
// at e = 1 where only the tight bound applies.
inline std::string sweep_to_csv(std::int64_t e_max) {
  if (e_max < 2) throw config_error("sweep requires e_max >= 2");
  std::string out = "e,tight,original\r\n";
  for (std::int64_t e = 1; e <= e_max; ++e) {
    const FailureBounds b = failure_bounds(e);
    out += std::to_string(e);
    out += ',';
    out += format_double(b.tight);
    out += ',';
    if (b.original) out += format_double(*b.original);
    out += "\r\n";
  }
  return out;
}

}  // namespace qpecert
