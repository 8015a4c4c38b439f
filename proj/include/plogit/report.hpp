#pragma once

#include "plogit/serialize.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace plogit {

enum class ReportFormat { json, csv };

ReportFormat parse_format(std::string_view name);
std::string_view to_string(ReportFormat format);

/// Everything one command produces. rows feed the CSV form; results holds the
/// full structured output.
struct Report {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  json results = json::object();
  std::vector<std::string> csv_columns;
  json rows = json::array();
  bool asserted = false;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  void fail(std::string message) { failures.push_back(std::move(message)); }
};

std::string artifact_version();

json to_json(const Report& report);

/// Deterministic JSON text: sorted keys, 2-space indent, arrays of scalars on
/// one line, floats with 17 significant digits, trailing newline.
std::string dump_json(const json& value);

/// Header row then one line per row object, cells in column order.
std::string dump_csv(const std::vector<std::string>& columns, const json& rows);

std::string render(const Report& report, ReportFormat format);

/// Writes the rendered report to path, or to stdout for "-". Throws
/// std::runtime_error when the file cannot be written.
void write_report(const Report& report, ReportFormat format, const std::string& path);

json parse_report(const std::string& text);
json read_report_file(const std::string& path);

}  // namespace plogit
