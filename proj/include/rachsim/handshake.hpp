#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rachsim/core.hpp"

namespace rachsim {

struct EventTrace;

// Step-2 downlink reply. TA and the grant are opaque tokens: only their
// presence and routing matter here. Devices that collided on one preamble
// receive the identical message.
struct RarMessage {
  PreambleId addressed_preamble = -1;
  std::uint32_t ta = 0;
  std::uint32_t ul_grant = 0;
  int temp_c_rnti = -1;
  std::optional<int> crb_tree_assignment;
};

enum class HandshakePhase { SentPreamble, GotRar, SentRrc, Resolved, CollidedAtStep4 };

enum class HandshakeEvent { RarReceived, RrcSent, ContentionResolved, ContentionLost };

std::string handshake_phase_name(HandshakePhase phase);

// Deterministic 4-step progression; anything off the ladder throws
// std::logic_error. ContentionLost is only legal from SentRrc: contention
// losers have already sent their RRC request when the step-4 tie-break fails.
HandshakePhase advance_handshake(HandshakePhase state, HandshakeEvent event);

struct ReplayReport {
  long long resolved = 0;
  long long collided_at_step4 = 0;   // baseline mode only
  long long collided_at_step1 = 0;   // CRB mode: detected before any RAR
  long long rars_issued = 0;         // one per active preamble per slot
  int max_c_rnti = -1;               // dedicated identifiers are allocated uniquely
};

// Replays an engine trace through the handshake machine, enforcing the
// message-level contracts: every success walks the full ladder, baseline
// collisions fail at step 4, CRB collisions never get past SentPreamble, and
// no two resolved devices share a dedicated identifier. Throws
// std::logic_error on any violation.
ReplayReport replay_trace(const EventTrace& trace);

}  // namespace rachsim
