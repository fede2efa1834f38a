#pragma once

#include <string>
#include <vector>

#include "rachsim/results_io.hpp"

namespace rachsim {

// Renders a line chart over results rows: x = simultaneous attempts, y = the
// selected metric, one series per scheme/slots/m variant, repetitions
// averaged. kind is "retransmissions" or "outage". Output is deterministic
// for identical input. Throws std::invalid_argument on an empty body or an
// unknown kind.
std::string render_plot(const std::vector<CsvRow>& rows, const std::string& kind);

void write_plot(const std::string& path, const std::vector<CsvRow>& rows,
                const std::string& kind);

}  // namespace rachsim
