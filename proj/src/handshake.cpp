#include "rachsim/handshake.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "rachsim/engine.hpp"

namespace rachsim {

std::string handshake_phase_name(HandshakePhase phase) {
  switch (phase) {
    case HandshakePhase::SentPreamble: return "sent_preamble";
    case HandshakePhase::GotRar: return "got_rar";
    case HandshakePhase::SentRrc: return "sent_rrc";
    case HandshakePhase::Resolved: return "resolved";
    case HandshakePhase::CollidedAtStep4: return "collided_at_step4";
  }
  throw std::invalid_argument("handshake_phase_name: unknown phase");
}

HandshakePhase advance_handshake(HandshakePhase state, HandshakeEvent event) {
  if (state == HandshakePhase::SentPreamble && event == HandshakeEvent::RarReceived) {
    return HandshakePhase::GotRar;
  }
  if (state == HandshakePhase::GotRar && event == HandshakeEvent::RrcSent) {
    return HandshakePhase::SentRrc;
  }
  if (state == HandshakePhase::SentRrc && event == HandshakeEvent::ContentionResolved) {
    return HandshakePhase::Resolved;
  }
  if (state == HandshakePhase::SentRrc && event == HandshakeEvent::ContentionLost) {
    return HandshakePhase::CollidedAtStep4;
  }
  throw std::logic_error("advance_handshake: illegal transition from " +
                         handshake_phase_name(state));
}

ReplayReport replay_trace(const EventTrace& trace) {
  ReplayReport report;
  // devices mid-handshake within the current tick
  std::map<DeviceId, HandshakePhase> pending;
  std::map<DeviceId, PreambleId> pending_preamble;
  // one RAR per active preamble per slot; collided devices share it
  std::map<std::pair<double, PreambleId>, RarMessage> rars;
  std::set<int> c_rntis_in_use;
  int next_c_rnti = 0;

  auto rar_for = [&](double t, PreambleId p) -> const RarMessage& {
    auto [it, inserted] = rars.try_emplace({t, p});
    if (inserted) {
      it->second.addressed_preamble = p;
      it->second.temp_c_rnti = next_c_rnti++;
      report.rars_issued += 1;
    }
    return it->second;
  };

  for (const TraceEvent& ev : trace.events) {
    switch (ev.kind) {
      case EventKind::Attempt: {
        if (pending.count(ev.device)) {
          throw std::logic_error("replay_trace: attempt while a handshake is open");
        }
        pending[ev.device] = HandshakePhase::SentPreamble;
        pending_preamble[ev.device] = ev.preamble;
        break;
      }
      case EventKind::Success: {
        auto it = pending.find(ev.device);
        if (it == pending.end() || pending_preamble.at(ev.device) != ev.preamble) {
          throw std::logic_error("replay_trace: success without a matching preamble");
        }
        const RarMessage& rar = rar_for(ev.t_ms, ev.preamble);
        HandshakePhase st = advance_handshake(it->second, HandshakeEvent::RarReceived);
        st = advance_handshake(st, HandshakeEvent::RrcSent);
        st = advance_handshake(st, HandshakeEvent::ContentionResolved);
        if (st != HandshakePhase::Resolved) {
          throw std::logic_error("replay_trace: success did not reach Resolved");
        }
        if (!c_rntis_in_use.insert(rar.temp_c_rnti).second) {
          throw std::logic_error("replay_trace: dedicated identifier reused");
        }
        report.max_c_rnti = std::max(report.max_c_rnti, rar.temp_c_rnti);
        report.resolved += 1;
        pending.erase(it);
        pending_preamble.erase(ev.device);
        break;
      }
      case EventKind::Collision: {
        auto it = pending.find(ev.device);
        if (it == pending.end() || pending_preamble.at(ev.device) != ev.preamble) {
          throw std::logic_error("replay_trace: collision without a matching preamble");
        }
        if (trace.crb_mode) {
          // detected at step 1 via the UE-ID: no RAR ladder, the device waits
          // for its tree assignment instead
          report.collided_at_step1 += 1;
        } else {
          const RarMessage& rar = rar_for(ev.t_ms, ev.preamble);
          if (rar.addressed_preamble != ev.preamble) {
            throw std::logic_error("replay_trace: RAR addressed to the wrong preamble");
          }
          HandshakePhase st = advance_handshake(it->second, HandshakeEvent::RarReceived);
          st = advance_handshake(st, HandshakeEvent::RrcSent);
          st = advance_handshake(st, HandshakeEvent::ContentionLost);
          if (st != HandshakePhase::CollidedAtStep4) {
            throw std::logic_error("replay_trace: collision did not reach CollidedAtStep4");
          }
          report.collided_at_step4 += 1;
        }
        pending.erase(it);
        pending_preamble.erase(ev.device);
        break;
      }
      case EventKind::TreeAssigned: {
        if (!trace.crb_mode) {
          throw std::logic_error("replay_trace: tree assignment outside CRB mode");
        }
        break;
      }
      case EventKind::Activation:
      case EventKind::Barred:
      case EventKind::Outage:
      case EventKind::Sib2Broadcast:
        break;
    }
  }
  if (!pending.empty()) {
    throw std::logic_error("replay_trace: handshake left open at end of trace");
  }
  return report;
}

}  // namespace rachsim
