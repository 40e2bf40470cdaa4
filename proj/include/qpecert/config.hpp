#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qpecert/common.hpp"
#include "qpecert/instances.hpp"

namespace qpecert {

enum class OutputFormat { json, csv, text };

inline std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::text: return "text";
  }
  return "json";
}

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw config_error("unknown output format: " + s);
}

inline std::string to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::dyadic: return "dyadic";
    case PhaseKind::nondyadic: return "nondyadic";
    case PhaseKind::mixed: return "mixed";
  }
  return "mixed";
}

inline PhaseKind parse_phase_kind(const std::string& s) {
  if (s == "dyadic") return PhaseKind::dyadic;
  if (s == "nondyadic") return PhaseKind::nondyadic;
  if (s == "mixed") return PhaseKind::mixed;
  throw config_error("unknown phase kind: " + s);
}

struct RunConfig {
  int t_max = 8;
  std::vector<int> s_values = {1, 2};
  PhaseKind phase_kind = PhaseKind::mixed;
  std::uint64_t seed = 12345;
  double strict_margin = 1e-12;
  double unitarity_tol = 1e-10;
  double elementwise_tol = 1e-12;
  std::vector<std::string> include;  // empty means every registered check
  std::vector<std::string> exclude;
  std::string out_path;
  OutputFormat format = OutputFormat::json;
  int workers = 0;  // 0 = available parallelism

  bool operator==(const RunConfig&) const = default;

  void validate() const {
    if (t_max < 1) throw config_error("t_max must be at least 1");
    if (s_values.empty()) throw config_error("s_values must not be empty");
    int s_max = 0;
    for (int s : s_values) {
      if (s < 1) throw config_error("s values must be positive");
      s_max = std::max(s_max, s);
    }
    if (t_max + s_max > kMaxTotalQubits)
      throw config_error("t_max + max(s) exceeds the " + std::to_string(kMaxTotalQubits) +
                         "-qubit cap");
    if (!(strict_margin > 0.0)) throw config_error("strict_margin must be positive");
    if (!(unitarity_tol > 0.0)) throw config_error("unitarity_tol must be positive");
    if (!(elementwise_tol > 0.0)) throw config_error("elementwise_tol must be positive");
    if (workers < 0) throw config_error("workers must be nonnegative");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::int64_t parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw config_error("");
    return v;
  } catch (...) {
    throw config_error("bad integer for " + key + ": " + value);
  }
}

inline double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw config_error("");
    return v;
  } catch (...) {
    throw config_error("bad number for " + key + ": " + value);
  }
}

}  // namespace detail

// Apply one "key = value" assignment to a config.
inline void apply_config_entry(RunConfig& config, const std::string& key,
                               const std::string& value) {
  if (key == "t_max") {
    config.t_max = static_cast<int>(detail::parse_int(value, key));
  } else if (key == "s_values") {
    config.s_values.clear();
    for (const std::string& item : detail::split_list(value))
      config.s_values.push_back(static_cast<int>(detail::parse_int(item, key)));
  } else if (key == "phase_kind") {
    config.phase_kind = parse_phase_kind(value);
  } else if (key == "seed") {
    config.seed = static_cast<std::uint64_t>(detail::parse_int(value, key));
  } else if (key == "strict_margin") {
    config.strict_margin = detail::parse_double(value, key);
  } else if (key == "unitarity_tol") {
    config.unitarity_tol = detail::parse_double(value, key);
  } else if (key == "elementwise_tol") {
    config.elementwise_tol = detail::parse_double(value, key);
  } else if (key == "include") {
    config.include = detail::split_list(value);
  } else if (key == "exclude") {
    config.exclude = detail::split_list(value);
  } else if (key == "out") {
    config.out_path = value;
  } else if (key == "format") {
    config.format = parse_output_format(value);
  } else if (key == "workers") {
    config.workers = static_cast<int>(detail::parse_int(value, key));
  } else {
    throw config_error("unknown config key: " + key);
  }
}

// Flat "key = value" lines; '#' starts a comment.
inline RunConfig parse_config_text(std::istream& stream, RunConfig base = RunConfig{}) {
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(line_no) + ": empty key");
    apply_config_entry(base, key, value);
  }
  return base;
}

inline RunConfig parse_config_file(const std::string& path, RunConfig base = RunConfig{}) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse_config_text(in, std::move(base));
}

// Phase flag: "a/2^q" (explicit dyadic), "p/q" (rational), or a decimal
// string. All three land in the exact rational carrier, so dyadic
// detection never involves floating point.
inline Phase parse_phase(const std::string& text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw config_error("empty phase");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num_part = detail::trim(s.substr(0, slash));
    std::string den_part = detail::trim(s.substr(slash + 1));
    const std::int64_t num = detail::parse_int(num_part, "phase numerator");
    std::int64_t den = 0;
    if (den_part.rfind("2^", 0) == 0) {
      const std::int64_t q = detail::parse_int(den_part.substr(2), "phase exponent");
      if (q < 0 || q > 62) throw config_error("phase exponent out of range");
      den = static_cast<std::int64_t>(pow2(static_cast<int>(q)));
    } else {
      den = detail::parse_int(den_part, "phase denominator");
    }
    if (den <= 0) throw config_error("phase denominator must be positive");
    if (num < 0 || num >= den) throw config_error("phase must lie in [0, 1)");
    return Phase::rational(num, den);
  }
  // decimal: digits, optionally "0.ddd" or ".ddd"
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    const std::int64_t whole = detail::parse_int(s, "phase");
    if (whole != 0) throw config_error("phase must lie in [0, 1)");
    return Phase::zero();
  }
  const std::string whole_part = s.substr(0, dot);
  const std::string frac_part = s.substr(dot + 1);
  if (!whole_part.empty() && detail::parse_int(whole_part, "phase") != 0)
    throw config_error("phase must lie in [0, 1)");
  if (frac_part.empty() || frac_part.size() > 15)
    throw config_error("phase decimal needs 1 to 15 digits");
  std::int64_t num = detail::parse_int(frac_part, "phase");
  if (num < 0) throw config_error("phase must lie in [0, 1)");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  return Phase::rational(num, den);
}

}  // namespace qpecert
