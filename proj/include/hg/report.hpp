#ifndef HG_REPORT_HPP
#define HG_REPORT_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hg {

// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct ReportRow {
  std::string experiment;
  nlohmann::ordered_json params;
  double measured = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  bool pass = false;

  // tolerance - |measured - expected| for value rows; for predicate rows the
  // caller may store a margin in `measured` itself, so fall back to +-1.
  double margin() const {
    if (expected) return tolerance - std::abs(measured - *expected);
    return pass ? 1.0 : -1.0;
  }
};

inline ReportRow make_value_row(std::string experiment, nlohmann::ordered_json params,
                                double measured, double expected, double tolerance) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.params = std::move(params);
  r.measured = measured;
  r.expected = expected;
  r.tolerance = tolerance;
  r.pass = std::abs(measured - expected) <= tolerance;
  return r;
}

inline ReportRow make_predicate_row(std::string experiment, nlohmann::ordered_json params,
                                    double measured, bool pass) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.params = std::move(params);
  r.measured = measured;
  r.pass = pass;
  return r;
}

namespace detail {
inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}
}  // namespace detail

// Columns: experiment,param_json,measured,expected,tolerance,pass. Expected
// stays empty for predicate rows.
inline std::string report_csv(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("report_csv: rows must be nonempty");
  std::string out = "experiment,param_json,measured,expected,tolerance,pass\n";
  for (const auto& r : rows) {
    out += detail::csv_quote(r.experiment);
    out += ',';
    out += detail::csv_quote(r.params.dump());
    out += ',';
    out += format_double(r.measured);
    out += ',';
    if (r.expected) out += format_double(*r.expected);
    out += ',';
    out += format_double(r.tolerance);
    out += ',';
    out += r.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json report_summary(const std::string& command,
                                             const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("report_summary: rows must be nonempty");
  std::size_t failed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_experiment;
  for (const auto& r : rows) {
    if (!r.pass) ++failed;
    const double m = r.margin();
    if (m < worst_margin) {
      worst_margin = m;
      worst_experiment = r.experiment;
    }
  }
  nlohmann::ordered_json j;
  j["command"] = command;
  j["total"] = rows.size();
  j["failed"] = failed;
  j["worst_margin"] = worst_margin;
  j["worst_experiment"] = worst_experiment;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

// CSV + JSON summary next to each other; byte-stable for fixed input.
inline void emit_report(const std::string& command, const std::vector<ReportRow>& rows,
                        const std::string& out_prefix) {
  write_text_file(out_prefix + ".csv", report_csv(rows));
  write_text_file(out_prefix + ".json", report_summary(command, rows).dump(2) + "\n");
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hg

#endif
