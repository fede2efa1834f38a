#pragma once

#include <string>
#include <vector>

#include "rachsim/engine.hpp"

namespace rachsim {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Pinned schema; the header line is covered by a golden test.
std::string results_csv_header();
std::string results_csv(const std::vector<BatchRecord>& records);
void write_results_csv(const std::string& path, const std::vector<BatchRecord>& records);

// Reproducibility manifest: artifact version, base seed, grid shape. No
// timestamps or host details, so reruns are byte-identical.
std::string manifest_text(const std::string& scenario_name, std::uint64_t seed, int points,
                          int repetitions);
void write_manifest(const std::string& path, const std::string& scenario_name,
                    std::uint64_t seed, int points, int repetitions);

std::string trace_csv(const EventTrace& trace);
void write_trace_csv(const std::string& path, const EventTrace& trace);

struct CsvRow {
  std::vector<std::string> fields;
};

// Minimal strict reader for our own results files: validates the header,
// returns body rows. Throws std::invalid_argument on schema mismatch.
std::vector<CsvRow> read_results_csv(const std::string& path);

}  // namespace rachsim
