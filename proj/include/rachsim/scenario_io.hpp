#pragma once

#include <string>
#include <vector>

#include "rachsim/engine.hpp"

namespace rachsim {

// A scenario file: one base Scenario plus optional sweep axes and output
// options. Expansion is a cartesian product scheme x slots x m x attempts,
// except that CRB points keep the base slot density (the controller owns it).
struct SweepSpec {
  Scenario base;
  std::vector<int> attempt_counts;     // overrides traffic.n_devices per point
  std::vector<int> m_values;           // CRB fixed-m variants
  std::vector<int> slots_per_frame;    // non-CRB slot-density variants
  std::vector<SchemeKind> schemes;     // scheme variants; empty = base scheme
  bool write_traces = false;

  void validate() const;
};

// Smallest PRACH configuration index with the given slot density.
int config_index_for_slots(int slots_per_frame);

// Grid points in sweep order: scheme (outer), slots, m, attempts (inner).
std::vector<Scenario> expand(const SweepSpec& spec);

// Strict parser: schema-validated, unknown keys rejected, errors name the
// violated invariant and the offending key path.
SweepSpec parse_scenario_file(const std::string& path);
SweepSpec parse_scenario_text(const std::string& text, const std::string& origin);

std::string scenario_to_text(const SweepSpec& spec);

// Built-in presets: "fig4", "fig5", "earthquake".
std::vector<std::string> preset_names();
SweepSpec make_preset(const std::string& name);

}  // namespace rachsim
