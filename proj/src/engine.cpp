#include "rachsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rachsim {

std::string scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Aloha: return "aloha";
    case SchemeKind::AlohaPlusAcb: return "aloha+acb";
    case SchemeKind::AlohaPlusBackoff: return "aloha+backoff";
    case SchemeKind::DynamicAllocation: return "dynalloc";
    case SchemeKind::Separation: return "separation";
    case SchemeKind::CrbRa: return "crb";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

std::string event_name(EventKind kind) {
  switch (kind) {
    case EventKind::Activation: return "activation";
    case EventKind::Attempt: return "attempt";
    case EventKind::Success: return "success";
    case EventKind::Collision: return "collision";
    case EventKind::Barred: return "barred";
    case EventKind::TreeAssigned: return "tree_assigned";
    case EventKind::Outage: return "outage";
    case EventKind::Sib2Broadcast: return "sib2";
  }
  throw std::invalid_argument("event_name: unknown event");
}

void Scenario::validate() const {
  traffic.validate();
  pool.validate();
  prach_slots_per_frame(prach_config_index);  // throws when out of range
  if (retransmission_cap && *retransmission_cap < 1) {
    throw std::invalid_argument("Scenario: retransmission cap must be >= 1");
  }
  if (horizon_ms <= 0) throw std::invalid_argument("Scenario: horizon must be > 0");
  if (n_repetitions < 1) throw std::invalid_argument("Scenario: repetitions must be >= 1");
  if (htc_fraction < 0.0 || htc_fraction > 1.0) {
    throw std::invalid_argument("Scenario: htc_fraction out of [0,1]");
  }
  if (reinit_spread_ms < 0) throw std::invalid_argument("Scenario: reinit spread must be >= 0");
  if (scheme.kind == SchemeKind::AlohaPlusAcb &&
      (scheme.acb.p < 0.0 || scheme.acb.p > 1.0 || scheme.acb.barring_ms < 0)) {
    throw std::invalid_argument("Scenario: ACB parameters invalid");
  }
  if (scheme.kind == SchemeKind::AlohaPlusBackoff && scheme.backoff_base_ms <= 0) {
    throw std::invalid_argument("Scenario: backoff base must be > 0");
  }
  if (scheme.kind == SchemeKind::Separation &&
      (scheme.mtc_fraction < 0.0 || scheme.mtc_fraction > 1.0)) {
    throw std::invalid_argument("Scenario: mtc_fraction out of [0,1]");
  }
  if (scheme.kind == SchemeKind::CrbRa) scheme.crb.validate();
}

namespace {

struct Sim {
  const Scenario& sc;
  Rng rng;
  std::vector<Device> devices;
  std::vector<DeviceId> active;  // activated, non-terminal, ascending id
  std::size_t next_activation = 0;
  PreamblePool pool;
  CrbState crb;
  EventTrace trace;
  std::vector<SlotOutcome> window_outcomes;  // since the last controller step
  std::optional<int> cap;
  bool is_crb;
  double t_end = 0.0;

  explicit Sim(const Scenario& s) : sc(s), rng(s.seed) {
    sc.validate();
    devices = build_devices(sc.traffic, sc.htc_fraction, rng);
    cap = sc.retransmission_cap;
    is_crb = sc.scheme.kind == SchemeKind::CrbRa;
    if (sc.scheme.kind == SchemeKind::Separation) {
      pool = separation_partition(kTotalPreambles - sc.pool.n_cf, sc.scheme.mtc_fraction);
    } else {
      pool = sc.pool.initial_pool();
    }
    crb.slots_per_frame = prach_slots_per_frame(sc.prach_config_index);
    crb.current_m = sc.scheme.crb.fixed_m.value_or(sc.scheme.crb.m0);
    trace.crb_mode = is_crb;
  }

  void emit(double t, EventKind kind, DeviceId dev = -1, RaSlotAddress slot = {},
            PreambleId preamble = -1, int node = -1, int level = 0) {
    trace.events.push_back({t, kind, dev, slot, preamble, node, level});
  }

  void activate_up_to(double t) {
    while (next_activation < devices.size() &&
           devices[next_activation].activation_ms <= t) {
      Device& d = devices[next_activation];
      d.phase = Phase::Ready;
      d.next_eligible_ms = d.activation_ms;
      active.push_back(d.id);
      emit(d.activation_ms, EventKind::Activation, d.id);
      ++next_activation;
    }
  }

  bool wants_attempt(Device& d, double t) {
    if (d.terminal() || d.phase == Phase::Dormant) return false;
    if (d.phase == Phase::Barred) {
      if (t < d.barred_until_ms) return false;
      d.phase = Phase::Ready;
    }
    if (d.phase == Phase::AssignedToTree) {
      return d.tree_node >= 0 && d.next_eligible_ms <= t &&
             pool.reserved.count(d.tree_node) > 0;
    }
    return d.next_eligible_ms <= t;
  }

  void run_slot(RaSlotAddress slot) {
    const double t = slot.time_ms();
    activate_up_to(t);

    std::vector<std::pair<DeviceId, PreambleId>> attempts;
    for (DeviceId id : active) {
      Device& d = devices[id];
      if (!wants_attempt(d, t)) continue;
      if (sc.scheme.kind == SchemeKind::AlohaPlusAcb && is_mtc(d.cls)) {
        d = acb_gate(d, sc.scheme.acb.p, sc.scheme.acb.barring_ms, t, rng);
        if (d.phase == Phase::Barred) {
          emit(t, EventKind::Barred, d.id, slot);
          continue;
        }
      }
      const std::set<PreambleId>* subset =
          is_crb ? nullptr : eligible_pool(d, pool);
      std::set<PreambleId> crb_subset;
      if (is_crb) {
        crb_subset = crb_admission(d, pool);
        if (!crb_subset.empty()) subset = &crb_subset;
      }
      if (subset == nullptr || subset->empty()) continue;
      auto it = subset->begin();
      std::advance(it, rng.index(subset->size()));
      const PreambleId p = *it;
      if (!d.first_attempt_ms) d.first_attempt_ms = t;
      attempts.emplace_back(d.id, p);
      emit(t, EventKind::Attempt, d.id, slot, p);
    }
    if (attempts.empty() && !is_crb && sc.scheme.kind != SchemeKind::DynamicAllocation) return;

    SlotOutcome outcome = resolve_slot(attempts, slot, pool);
    for (const auto& [p, result] : outcome.per_preamble) {
      if (result.kind == PreambleResult::Kind::Success) {
        Device& d = devices[result.device];
        d.attempts_made += 1;
        d.consecutive_failures = 0;
        d.phase = Phase::Succeeded;
        d.succeeded_at_ms = t;
        emit(t, EventKind::Success, d.id, slot, p);
      } else if (result.kind == PreambleResult::Kind::Collision) {
        for (DeviceId id : result.devices) on_collision(devices[id], t, slot, p);
      }
    }
    window_outcomes.push_back(std::move(outcome));
  }

  void on_collision(Device& d, double t, RaSlotAddress slot, PreambleId p) {
    emit(t, EventKind::Collision, d.id, slot, p);
    if (is_crb && is_mtc(d.cls)) {
      // collision detected at step 1; the device holds for the RAR that will
      // carry its tree-node assignment at the end of the virtual frame
      d.attempts_made += 1;
      d.consecutive_failures += 1;
      if (cap && d.attempts_made >= *cap) {
        d.phase = Phase::Outage;
        emit(t, EventKind::Outage, d.id, slot);
      } else {
        d.phase = Phase::AssignedToTree;
        d.tree_node = -1;
      }
      return;
    }
    d = aloha_on_collision(d, cap);
    if (d.phase == Phase::Outage) {
      emit(t, EventKind::Outage, d.id, slot);
      return;
    }
    if (sc.scheme.kind == SchemeKind::AlohaPlusBackoff) {
      d = backoff_apply(d, sc.scheme.backoff_base_ms, t, rng);
    } else {
      d.next_eligible_ms = t + rng.uniform() * sc.reinit_spread_ms;
    }
  }

  void crb_controller_step(int frame) {
    const double t = (frame + 1) * kFrameMs;
    CrbFrameUpdate update = crb_on_frame_end(
        window_outcomes, sc.scheme.crb, crb, sc.pool,
        [&](DeviceId id) { return !devices[id].terminal(); });
    window_outcomes.clear();
    pool = update.sib2.pool;
    emit(t, EventKind::Sib2Broadcast, -1, {frame + 1, 0}, -1, -1, crb.slots_per_frame);
    for (const auto& [dev, node] : update.rar_assignments) {
      Device& d = devices[dev];
      d.tree_node = node;
      d.phase = Phase::AssignedToTree;
      emit(t, EventKind::TreeAssigned, dev, {frame + 1, 0}, -1, node,
           crb.nodes.at(node).level_d);
    }
    for (DeviceId dev : update.released) {
      Device& d = devices[dev];
      d.phase = Phase::Ready;
      d.tree_node = -1;
      d.next_eligible_ms = t + rng.uniform() * sc.reinit_spread_ms;
    }
    for (int node_id : update.scheduled_nodes) {
      for (DeviceId dev : crb.nodes.at(node_id).members) {
        Device& d = devices[dev];
        if (d.terminal()) continue;
        d.next_eligible_ms = t;  // attempt in the reserved set next virtual frame
      }
    }
  }

  void compact_active() {
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](DeviceId id) { return devices[id].terminal(); }),
                 active.end());
  }

  bool finished() const {
    if (next_activation < devices.size()) return false;
    if (!active.empty()) return false;
    if (is_crb && (!crb.pending_fifo.empty() ||
                   std::any_of(crb.nodes.begin(), crb.nodes.end(), [&](const auto& kv) {
                     return std::any_of(kv.second.members.begin(), kv.second.members.end(),
                                        [&](DeviceId id) { return !devices[id].terminal(); });
                   }))) {
      return false;
    }
    return true;
  }

  RunResult finish(double end_ms, bool truncated) {
    activate_up_to(end_ms);
    for (Device& d : devices) {
      if (d.phase == Phase::Dormant || d.terminal()) continue;
      d.phase = Phase::Outage;
      emit(end_ms, EventKind::Outage, d.id);
    }
    trace.end_ms = end_ms;
    trace.truncated = truncated;
    RunResult out;
    out.trace = std::move(trace);
    out.crb = std::move(crb);
    out.metrics = summarize(out.trace, sc);
    return out;
  }

  RunResult run() {
    const int vf_len = is_crb ? sc.scheme.crb.virtual_frame_len : 1;
    int spf = crb.slots_per_frame;
    for (int frame = 0;; ++frame) {
      const double frame_start = frame * kFrameMs;
      if (frame_start >= sc.horizon_ms) return finish(sc.horizon_ms, !finished());

      for (int sub : ra_subframes(spf)) {
        run_slot({frame, sub});
      }
      compact_active();

      const bool window_end = (frame + 1) % vf_len == 0;
      if (is_crb && window_end) {
        crb_controller_step(frame);
        spf = crb.slots_per_frame;
      } else if (sc.scheme.kind == SchemeKind::DynamicAllocation) {
        const CollisionRate kappa = kappa_of(window_outcomes);
        window_outcomes.clear();
        crb.slots_per_frame =
            dynamic_allocation_step(kappa, crb.slots_per_frame, sc.scheme.dyn);
        spf = crb.slots_per_frame;
        emit((frame + 1) * kFrameMs, EventKind::Sib2Broadcast, -1, {frame + 1, 0}, -1, -1, spf);
      } else if (!is_crb) {
        window_outcomes.clear();
      }

      if (finished()) return finish((frame + 1) * kFrameMs, false);
    }
  }
};

}  // namespace

RunResult run(const Scenario& scenario) {
  Sim sim(scenario);
  return sim.run();
}

std::vector<BatchRecord> run_batch(const std::vector<Scenario>& points, int repetitions,
                                   std::uint64_t seed, int workers) {
  if (repetitions < 1) throw std::invalid_argument("run_batch: repetitions must be >= 1");
  if (workers < 1) throw std::invalid_argument("run_batch: workers must be >= 1");

  std::vector<BatchRecord> records(points.size() * static_cast<std::size_t>(repetitions));
  for (std::size_t pt = 0; pt < points.size(); ++pt) {
    for (int rep = 0; rep < repetitions; ++rep) {
      BatchRecord& rec = records[pt * repetitions + rep];
      rec.point = static_cast<int>(pt);
      rec.rep = rep;
      rec.seed = derive_seed(seed, pt, static_cast<std::uint64_t>(rep));
      rec.scenario = points[pt];
      rec.scenario.seed = rec.seed;
    }
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= records.size()) return;
      records[i].metrics = run(records[i].scenario).metrics;
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  return records;
}

}  // namespace rachsim
