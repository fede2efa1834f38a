#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rachsim/core.hpp"
#include "rachsim/rng.hpp"

namespace rachsim {

struct AcbParams {
  double p = 1.0;            // access probability broadcast by the eNB
  double barring_ms = 4000;  // T_b
};

// Fixed preamble index layout: [0, n_cf) contention-free, then HTC, then the
// MTC contention range [64 - mtc_count, 64). Reserved tree sets are carved
// from the MTC range.
struct PoolLayout {
  int n_cf = 10;
  int mtc_count = 30;

  int htc_count() const { return kTotalPreambles - n_cf - mtc_count; }
  int mtc_first() const { return kTotalPreambles - mtc_count; }
  void validate() const;
  PreamblePool initial_pool() const;
};

// End-of-frame broadcast: RA layout for the next (virtual) frame.
struct Sib2Update {
  int slots_per_frame = 2;
  int m = 3;
  std::optional<AcbParams> acb;
  PreamblePool pool;
  int virtual_frame_len = 1;  // radio frames

  void validate() const;
};

struct ContentionTreeNode {
  int node_id = 0;
  std::vector<DeviceId> members;  // >= 2 at creation
  int level_d = 1;
  std::set<PreambleId> reserved;  // size m once scheduled, empty while deferred
  std::optional<int> parent;
  int split_m = 2;  // reserved-set size fixed at creation
  // RA slot whose root collision this subtree descends from; the worst-case
  // reservation bound m^d * q is stated per such cohort
  long long root_cohort = 0;
  enum class Status { Pending, Resolving, Resolved } status = Status::Pending;
};

struct CrbConfig {
  double x = 0.5;  // lower collision-rate threshold
  double y = 2.0;  // upper collision-rate threshold
  int m0 = 3;      // "for optimal resource utilization, m0 = 3"
  int m_x = 4;
  int m_y = 6;
  int delta_x = 1;  // extra RA slots when x <= kappa < y
  int delta_y = 2;  // extra RA slots when kappa >= y
  int virtual_frame_len = 2;  // radio frames
  std::optional<int> fixed_m;  // freeze m (the paper's figures use fixed m)
  bool freeze_delta = false;   // never grow slots_per_frame

  void validate() const;
};

struct CollisionRate {
  double kappa = 0.0;  // collided preambles / successful preambles
};

// Collided preambles divided by successful preambles over a window; the
// denominator is floored at 1 so an all-collision frame stays finite.
CollisionRate kappa_of(const std::vector<SlotOutcome>& outcomes);

// --- slotted-Aloha baseline -------------------------------------------------

// Counts the failed attempt; past the retransmission cap the device is in
// outage, otherwise it re-initiates.
Device aloha_on_collision(Device d, std::optional<int> cap);

// ACB gate: draw q uniform; q <= p passes, otherwise barred until now + T_b.
Device acb_gate(Device d, double p, double barring_ms, double now_ms, Rng& rng);

// Backoff deferral: uniform draw on [0, BI], BI doubling per consecutive
// failure up to ten times the base.
Device backoff_apply(Device d, double base_bi_ms, double now_ms, Rng& rng);

// --- resource separation / dynamic allocation --------------------------------

// Splits total_contention preambles into round(fraction * total) MTC and the
// rest HTC (contention-free preambles below them, n_cf fixed at layout).
PreamblePool separation_partition(int total_contention, double mtc_fraction);

struct DynAllocPolicy {
  double high_water = 2.0;
  double low_water = 0.25;
  int step_up = 2;
  int step_down = 1;
};

// Steps slots_per_frame up/down on the collision rate, clamped to [1,10].
int dynamic_allocation_step(CollisionRate kappa, int current_slots, const DynAllocPolicy& policy);

// --- collision resolution (CRB-RA) -------------------------------------------

struct CrbState {
  std::map<int, ContentionTreeNode> nodes;
  std::deque<int> pending_fifo;  // node ids awaiting a reserved set, creation order
  int next_node_id = 0;
  int slots_per_frame = 2;
  int current_m = 3;

  // instrumentation
  // (root cohort, level) -> preambles ever demanded by that cohort's subtrees
  std::map<std::pair<long long, int>, int> cohort_level_demand;
  std::map<int, int> max_demand_per_level;  // level -> max demand of any one cohort
  long long reserved_preamble_slots = 0;    // sum of m over scheduled node-frames
};

struct CrbFrameUpdate {
  Sib2Update sib2;
  std::map<DeviceId, int> rar_assignments;  // device -> tree node (RAR content)
  std::vector<DeviceId> released;           // sole survivors, back to the open pool
  std::vector<int> scheduled_nodes;
};

// End-of-virtual-frame controller step: computes kappa, picks (m, delta) by
// the two-threshold rule, turns every MTC collision entry into a child tree
// node, schedules pending nodes FIFO into disjoint reserved sets, and emits
// the SIB2 for the next virtual frame. Reserved demand beyond the MTC pool is
// deferred, never dropped. `alive` filters members that went terminal.
CrbFrameUpdate crb_on_frame_end(const std::vector<SlotOutcome>& frame_outcomes,
                                const CrbConfig& cfg, CrbState& state, const PoolLayout& layout,
                                const std::function<bool(DeviceId)>& alive);

// Eligible subset per the CRB admission rule; empty when the device's node is
// still deferred.
std::set<PreambleId> crb_admission(const Device& d, const PreamblePool& pool);

}  // namespace rachsim
