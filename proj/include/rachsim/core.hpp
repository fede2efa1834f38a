#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rachsim/rng.hpp"

namespace rachsim {

using PreambleId = int;
using DeviceId = int;

inline constexpr int kTotalPreambles = 64;
inline constexpr double kFrameMs = 10.0;  // one radio frame

struct PoolExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// RA slots per 10 ms radio frame, indexed by PRACH configuration index.
// Index 6 -> 2 and the table tops out at 10, mirroring the 3GPP densities
// where they are pinned; intermediate entries are an artifact convention.
int prach_slots_per_frame(int config_index);

// Subframe positions of the k RA slots within a radio frame, evenly spaced.
std::vector<int> ra_subframes(int slots_per_frame);

enum class DeviceClass { Htc, MtcHighPriority, MtcLowPriority };

inline bool is_mtc(DeviceClass c) { return c != DeviceClass::Htc; }

enum class Phase { Dormant, Ready, Barred, AssignedToTree, Succeeded, Outage };

struct Device {
  DeviceId id = 0;
  DeviceClass cls = DeviceClass::MtcLowPriority;
  double activation_ms = 0.0;
  std::optional<std::array<double, 2>> position_km;
  int attempts_made = 0;
  Phase phase = Phase::Dormant;
  double barred_until_ms = 0.0;          // valid while Barred
  int tree_node = -1;                    // valid while AssignedToTree; -1 = awaiting RAR
  double succeeded_at_ms = -1.0;
  std::optional<double> first_attempt_ms;
  double next_eligible_ms = 0.0;         // re-initiation / backoff deferral
  int consecutive_failures = 0;

  bool terminal() const { return phase == Phase::Succeeded || phase == Phase::Outage; }
};

struct RaSlotAddress {
  int frame = 0;
  int subframe = 0;
  double time_ms() const { return frame * kFrameMs + subframe; }
  auto operator<=>(const RaSlotAddress&) const = default;
};

enum class PoolKind { ContentionFree, Htc, MtcOpen, Reserved };

// Partition of the 64 preamble indices, valid for one virtual RA frame.
struct PreamblePool {
  std::set<PreambleId> contention_free;
  std::set<PreambleId> htc;
  std::set<PreambleId> mtc_open;
  std::map<int, std::set<PreambleId>> reserved;  // tree-node id -> set

  void validate() const;  // throws std::logic_error on partition violation

  // Pool lookup for a transmitted preamble; Reserved entries report the node.
  std::pair<PoolKind, int> classify(PreambleId p) const;

  // All contention preambles usable in a slot (everything except
  // contention-free, which never contends).
  std::set<PreambleId> contention_set() const;
};

struct PreambleResult {
  enum class Kind { Idle, Success, Collision };
  Kind kind = Kind::Idle;
  DeviceId device = -1;              // Success
  std::vector<DeviceId> devices;     // Collision, sorted, size >= 2
  PoolKind pool = PoolKind::MtcOpen;
  int node_id = -1;                  // owning tree node when pool == Reserved
};

struct SlotOutcome {
  RaSlotAddress slot;
  std::map<PreambleId, PreambleResult> per_preamble;  // one entry per available preamble

  int idle_count() const;
  int success_count() const;
  int collision_count() const;
};

// Closed-form parameter bundle shared with the analytic module.
struct AnalyticParams {
  double attempt_count = 0;          // n
  double opportunities_per_s = 0;    // R
  double window_s = 0;               // T
  int preambles_per_slot = 0;        // M
  int slots_per_virtual_frame = 0;   // L
  int root_pool_size = 0;            // q at tree level 0
  int split_factor = 0;              // m
  int tree_level = 0;                // d
  void validate() const;
};

// Eligible contention subset for a device, or nullptr when the device has no
// usable preambles this frame (empty pool / deferred tree node).
const std::set<PreambleId>* eligible_pool(const Device& d, const PreamblePool& pool);

// Uniform pick from the device's eligible subset; one rng draw.
PreambleId select_preamble(const Device& d, const PreamblePool& pool, Rng& rng);

// Groups attempts by preamble: singletons succeed, groups collide, the rest
// of the pool idles. Throws std::invalid_argument on duplicate device ids.
SlotOutcome resolve_slot(const std::vector<std::pair<DeviceId, PreambleId>>& attempts,
                         RaSlotAddress slot, const PreamblePool& pool);

}  // namespace rachsim
