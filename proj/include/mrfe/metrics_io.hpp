#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mrfe/exploration_loop.hpp"

namespace mrfe {

/// Fixed CSV schemas. Timings are printed with nanosecond precision and
/// fractions with 12 decimals so statistics recomputed from the files match
/// the in-memory values within 1e-9.
extern const char* const kIterationCsvHeader;  // iter,Fg,Fl,Fexp,Fc,t_octo,...
extern const char* const kVolumeCsvHeader;     // t,free,occ,unknown
extern const char* const kCandidateCsvHeader;  // iter,x,y,z,I,L,G,chosen

std::string iterationCsvRow(const IterationMetrics& m);
std::string volumeCsvRow(const VolumeSample& v);
std::vector<std::string> candidateCsvRows(const IterationMetrics& m);

/// End-of-run summary as JSON text (stable key order).
std::string summaryJson(const MetricsLog& log, const std::string& scenario_name);

/// Minimal CSV reader for validation tooling: splits every line on commas.
std::vector<std::vector<std::string>> readCsv(const std::string& path);

/// Mean and sample standard deviation of one numeric CSV column (by header
/// name). Throws on unknown columns.
struct ColumnStats {
  double mean = 0.0;
  double stdev = 0.0;
  std::size_t count = 0;
};
ColumnStats columnStats(const std::vector<std::vector<std::string>>& csv,
                        const std::string& column);

}  // namespace mrfe
