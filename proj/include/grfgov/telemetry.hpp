#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "grfgov/simulation.hpp"

namespace grfgov {

struct CsvLayout {
  int n_x = kRefDim;
  int n_c = 4;
};

std::vector<std::string> csvHeader(const CsvLayout& layout);

/// Column counts come from the first record; `fallback` is used when the
/// list is empty.
void writeCsv(std::ostream& os, const std::vector<TelemetryRecord>& records,
              const CsvLayout& fallback = {});

/// Throws std::runtime_error naming the path when it cannot be written.
void exportCsv(const std::vector<TelemetryRecord>& records, const std::string& path,
               const CsvLayout& fallback = {});

std::vector<TelemetryRecord> parseCsv(std::istream& is, CsvLayout* layout = nullptr);
std::vector<TelemetryRecord> readCsv(const std::string& path, CsvLayout* layout = nullptr);

}  // namespace grfgov
