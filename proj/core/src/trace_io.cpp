#include "imro/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace imro {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const SolverTrace& trace, bool include_timing) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    out << "# solver = " << trace.solver << "\n";
    out << "# status = " << to_string(trace.status) << "\n";
    out << "# x0 = " << trace.x0_note << "\n";
    out << "# norm_estimate = " << fmt17(trace.norm_estimate) << "\n";

    bool with_err = false;
    for (const TraceRecord& r : trace.records) {
      if (!std::isnan(r.x_err)) {
        with_err = true;
        break;
      }
    }
    out << "iter,a_calls,objective,subgrad_norm,seconds";
    if (with_err) out << ",x_err";
    out << "\n";
    for (const TraceRecord& r : trace.records) {
      out << r.iter << ',' << r.a_calls << ',' << fmt17(r.objective) << ','
          << fmt17(r.subgrad_norm) << ','
          << fmt17(include_timing ? r.seconds : 0.0);
      if (with_err) out << ',' << fmt17(r.x_err);
      out << "\n";
    }
    if (!out) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace: " + path.string());
  }
  TraceFile file;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        file.notes[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      }
      continue;
    }
    if (!have_header) {
      for (const std::string& c : split_csv(line)) {
        file.columns.push_back(trim(c));
      }
      have_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != file.columns.size()) {
      throw std::runtime_error("trace row has " +
                               std::to_string(fields.size()) +
                               " fields, header has " +
                               std::to_string(file.columns.size()));
    }
    TraceRecord rec;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string& col = file.columns[i];
      const std::string& val = fields[i];
      if (col == "iter") {
        rec.iter = std::strtoll(val.c_str(), nullptr, 10);
      } else if (col == "a_calls") {
        rec.a_calls = std::strtoull(val.c_str(), nullptr, 10);
      } else if (col == "objective") {
        rec.objective = std::strtod(val.c_str(), nullptr);
      } else if (col == "subgrad_norm") {
        rec.subgrad_norm = std::strtod(val.c_str(), nullptr);
      } else if (col == "seconds") {
        rec.seconds = std::strtod(val.c_str(), nullptr);
      } else if (col == "x_err") {
        rec.x_err = std::strtod(val.c_str(), nullptr);
      }
    }
    file.records.push_back(rec);
  }
  return file;
}

}  // namespace imro
