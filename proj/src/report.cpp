#include "plogit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#ifndef PLOGIT_VERSION
#define PLOGIT_VERSION "0.0.0"
#endif

namespace plogit {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a float a float after a round trip.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string scalar_text(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

bool is_scalar(const json& v) { return !v.is_object() && !v.is_array(); }

void emit(const json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {  // std::map order: sorted
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      emit(it.value(), depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : v) flat = flat && is_scalar(e);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + scalar_text(v[i]);
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      emit(v[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else {
    out += scalar_text(v);
  }
}

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
  } else {
    s = scalar_text(v);
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown format: " + std::string(name));
}

std::string_view to_string(ReportFormat format) {
  return format == ReportFormat::json ? "json" : "csv";
}

std::string artifact_version() { return PLOGIT_VERSION; }

json to_json(const Report& r) {
  return json{{"artifact", "plogit"},
              {"version", artifact_version()},
              {"command", r.command},
              {"config", r.config},
              {"seed", r.seed},
              {"results", r.results},
              {"rows", r.rows},
              {"verdict",
               {{"asserted", r.asserted}, {"passed", r.passed()}, {"failures", r.failures}}}};
}

std::string dump_json(const json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

std::string dump_csv(const std::vector<std::string>& columns, const json& rows) {
  std::string out;
  for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + columns[k];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) out += ",";
      auto it = row.find(columns[k]);
      if (it != row.end()) out += csv_cell(*it);
    }
    out += "\n";
  }
  return out;
}

std::string render(const Report& report, ReportFormat format) {
  if (format == ReportFormat::csv) return dump_csv(report.csv_columns, report.rows);
  return dump_json(to_json(report));
}

void write_report(const Report& report, ReportFormat format, const std::string& path) {
  const std::string text = render(report, format);
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write report to " + path);
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("error while writing report to " + path);
}

json parse_report(const std::string& text) { return json::parse(text); }

json read_report_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_report(ss.str());
}

}  // namespace plogit
