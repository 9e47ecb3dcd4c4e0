// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/emit.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace vortexpair::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

// checksum over the data records only (inputs/outputs/errors), so cache
// verification ignores wall-clock metadata
std::string points_digest(const SweepResult& r) {
  std::ostringstream os;
  for (const auto& p : r.points) {
    for (double v : p.inputs) os << fmt17(v) << ",";
    os << ";";
    for (double v : p.outputs) os << fmt17(v) << ",";
    os << ";" << fmt17(p.quad_error) << ";";
    for (const auto& w : p.warnings) os << w << "|";
    os << "\n";
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

} // namespace

std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "# artifact: " << r.artifact_version << "\n";
  os << "# preset: " << r.preset << "\n";
  os << "# config_hash: " << r.config_hash << "\n";
  os << "# mode: " << r.mode << "\n";
  for (std::size_t i = 0; i < r.points.size(); ++i)
    for (const auto& w : r.points[i].warnings) os << "# warning[" << i << "]: " << w << "\n";
  for (std::size_t i = 0; i < r.input_names.size(); ++i) os << (i ? "," : "") << r.input_names[i];
  for (const auto& n : r.output_names) os << "," << n;
  os << ",quad_error\n";
  for (const auto& p : r.points) {
    for (std::size_t i = 0; i < p.inputs.size(); ++i) os << (i ? "," : "") << fmt17(p.inputs[i]);
    for (double v : p.outputs) os << "," << fmt17(v);
    os << "," << fmt17(p.quad_error) << "\n";
  }
  return os.str();
}

std::string to_json(const SweepResult& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"artifact_version\": \"" << json_escape(r.artifact_version) << "\",\n";
  os << "  \"preset\": \"" << json_escape(r.preset) << "\",\n";
  os << "  \"config_hash\": \"" << r.config_hash << "\",\n";
  os << "  \"mode\": \"" << json_escape(r.mode) << "\",\n";
  os << "  \"points_checksum\": \"" << points_digest(r) << "\",\n";
  os << "  \"config_text\": \"" << json_escape(r.config_text) << "\",\n";
  os << "  \"input_names\": [";
  for (std::size_t i = 0; i < r.input_names.size(); ++i)
    os << (i ? ", " : "") << "\"" << json_escape(r.input_names[i]) << "\"";
  os << "],\n  \"output_names\": [";
  for (std::size_t i = 0; i < r.output_names.size(); ++i)
    os << (i ? ", " : "") << "\"" << json_escape(r.output_names[i]) << "\"";
  os << "],\n  \"points\": [\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    os << "    {\"inputs\": [";
    for (std::size_t j = 0; j < p.inputs.size(); ++j) os << (j ? ", " : "") << fmt17(p.inputs[j]);
    os << "], \"outputs\": [";
    for (std::size_t j = 0; j < p.outputs.size(); ++j)
      os << (j ? ", " : "") << fmt17(p.outputs[j]);
    os << "], \"quad_error\": " << fmt17(p.quad_error);
    os << ", \"wall_ms\": " << fmt17(p.wall_ms);
    os << ", \"warnings\": [";
    for (std::size_t j = 0; j < p.warnings.size(); ++j)
      os << (j ? ", " : "") << "\"" << json_escape(p.warnings[j]) << "\"";
    os << "]}" << (i + 1 < r.points.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

SweepResult from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SweepResult r;
  r.artifact_version = j.at("artifact_version").get<std::string>();
  r.preset = j.at("preset").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.config_text = j.at("config_text").get<std::string>();
  r.input_names = j.at("input_names").get<std::vector<std::string>>();
  r.output_names = j.at("output_names").get<std::vector<std::string>>();
  for (const auto& jp : j.at("points")) {
    SweepPoint p;
    p.inputs = jp.at("inputs").get<std::vector<double>>();
    p.outputs = jp.at("outputs").get<std::vector<double>>();
    p.quad_error = jp.at("quad_error").get<double>();
    p.wall_ms = jp.value("wall_ms", 0.0);
    if (jp.contains("warnings")) p.warnings = jp.at("warnings").get<std::vector<std::string>>();
    r.points.push_back(std::move(p));
  }
  const std::string digest = j.value("points_checksum", std::string());
  if (!digest.empty() && digest != points_digest(r))
    throw std::runtime_error("from_json: checksum mismatch (corrupted document)");
  return r;
}

SweepResult from_csv(const std::string& text) {
  SweepResult r;
  std::istringstream is(text);
  std::string line;
  bool header_done = false;
  std::size_t n_inputs = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto grab = [&](const char* tag) -> std::string {
        const std::string t = std::string("# ") + tag + ": ";
        return line.rfind(t, 0) == 0 ? line.substr(t.size()) : std::string();
      };
      if (auto v = grab("artifact"); !v.empty()) r.artifact_version = v;
      if (auto v = grab("preset"); !v.empty()) r.preset = v;
      if (auto v = grab("config_hash"); !v.empty()) r.config_hash = v;
      if (auto v = grab("mode"); !v.empty()) r.mode = v;
      continue;
    }
    if (!header_done) {
      std::stringstream ss(line);
      std::string col;
      std::vector<std::string> cols;
      while (std::getline(ss, col, ',')) cols.push_back(col);
      if (cols.empty() || cols.back() != "quad_error")
        throw std::runtime_error("from_csv: malformed column header");
      // inputs come first; split heuristically at known output names is not
      // possible generically, so record all names and resplit on read-back
      r.input_names.assign(cols.begin(), cols.end() - 1);
      header_done = true;
      n_inputs = r.input_names.size();
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != n_inputs + 1) throw std::runtime_error("from_csv: ragged row");
    SweepPoint p;
    p.inputs.assign(vals.begin(), vals.end() - 1);
    p.quad_error = vals.back();
    r.points.push_back(std::move(p));
  }
  return r;
}

void emit(const SweepResult& r, OutputFormat format, const std::string& path) {
  const std::string payload = format == OutputFormat::Csv ? to_csv(r) : to_json(r);
  if (path == "-" || path.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  f << payload;
  if (!f) throw std::runtime_error("emit: short write to '" + path + "'");
}

} // namespace vortexpair::harness
