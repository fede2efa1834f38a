#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rachsim/core.hpp"
#include "rachsim/metrics.hpp"
#include "rachsim/schemes.hpp"
#include "rachsim/traffic.hpp"

namespace rachsim {

enum class SchemeKind { Aloha, AlohaPlusAcb, AlohaPlusBackoff, DynamicAllocation, Separation, CrbRa };

std::string scheme_name(SchemeKind kind);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Aloha;
  AcbParams acb;                 // AlohaPlusAcb
  double backoff_base_ms = 20.0; // AlohaPlusBackoff
  DynAllocPolicy dyn;            // DynamicAllocation
  double mtc_fraction = 0.3;     // Separation
  CrbConfig crb;                 // CrbRa
};

struct Scenario {
  std::string name = "scenario";
  TrafficModel traffic;
  SchemeConfig scheme;
  int prach_config_index = 6;
  std::optional<int> retransmission_cap = 10;
  std::uint64_t seed = 1;
  double horizon_ms = 30000.0;
  int n_repetitions = 1;
  PoolLayout pool;
  double htc_fraction = 0.0;
  // A collided device re-initiates after a uniform delay in [0, this) ms,
  // standing in for the RAR window and contention-resolution timeout it
  // would otherwise sit out. Synchronized immediate retries deadlock the
  // channel at the loads studied here.
  double reinit_spread_ms = 32.0;

  void validate() const;
};

enum class EventKind {
  Activation,
  Attempt,
  Success,
  Collision,
  Barred,
  TreeAssigned,
  Outage,
  Sib2Broadcast
};

std::string event_name(EventKind kind);

struct TraceEvent {
  double t_ms = 0.0;
  EventKind kind = EventKind::Activation;
  DeviceId device = -1;
  RaSlotAddress slot;
  PreambleId preamble = -1;
  int node_id = -1;
  int level = 0;
};

struct EventTrace {
  std::vector<TraceEvent> events;
  double end_ms = 0.0;
  bool crb_mode = false;
  bool truncated = false;  // horizon hit with devices still pending
};

struct RunResult {
  MetricsRecord metrics;
  EventTrace trace;
  CrbState crb;  // final controller state (instrumentation), CRB runs only
};

RunResult run(const Scenario& scenario);

struct BatchRecord {
  int point = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  Scenario scenario;
  MetricsRecord metrics;
};

// One run per (grid point, repetition) with derived sub-seeds; results are
// ordered by (point, rep) regardless of worker count. Keeps metrics only;
// callers wanting a trace re-run the point with its recorded seed.
std::vector<BatchRecord> run_batch(const std::vector<Scenario>& points, int repetitions,
                                   std::uint64_t seed, int workers);

}  // namespace rachsim
