#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rachsim {

struct Scenario;
struct EventTrace;

struct MetricsRecord {
  int n_devices = 0;
  int simultaneous_attempts = 0;  // activations within the busiest radio frame
  double avg_retransmissions = 0.0;      // mean attempts-1 over Succeeded devices
  double avg_retransmissions_all = 0.0;  // same, over every activated device
  double outage_probability = 0.0;
  double mean_access_delay_ms = 0.0;  // Succeeded only: success time - first attempt
  std::vector<double> kappa_series;   // per radio frame
  double success_rate = 0.0;          // successes / attempts
  double throughput_per_opportunity = 0.0;  // successes / (slots * contention preambles)
  double first_attempt_collision_fraction = 0.0;
  bool horizon_truncated = false;  // some devices were still pending at the horizon
};

// Pure function of the trace (plus static scenario parameters for the
// opportunity count); recomputing from a persisted trace reproduces the
// record exactly. Throws if the trace left non-terminal devices unflagged.
MetricsRecord summarize(const EventTrace& trace, const Scenario& scenario);

struct FieldStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct MetricsSummary {
  FieldStats avg_retransmissions;
  FieldStats outage_probability;
  FieldStats mean_access_delay_ms;
  FieldStats success_rate;
  FieldStats throughput_per_opportunity;
  FieldStats first_attempt_collision_fraction;
  int repetitions = 0;
};

MetricsSummary aggregate(const std::vector<MetricsRecord>& records);

}  // namespace rachsim
