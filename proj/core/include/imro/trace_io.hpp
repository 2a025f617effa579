#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "imro/solver.hpp"

namespace imro {

// Trace CSV layout: '#'-prefixed "key = value" note lines, one header row
// naming the columns, then one row per iteration. Values are printed with 17
// significant digits so a read-back reproduces them exactly. The x_err column
// appears only when the run had a reference solution. seconds is written as 0
// unless include_timing is set, keeping default outputs byte-reproducible.
void write_trace_csv(const std::filesystem::path& path,
                     const SolverTrace& trace, bool include_timing = false);

struct TraceFile {
  std::map<std::string, std::string> notes;
  std::vector<std::string> columns;
  std::vector<TraceRecord> records;
};

TraceFile read_trace_csv(const std::filesystem::path& path);

}  // namespace imro
