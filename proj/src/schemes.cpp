#include "rachsim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rachsim {

void PoolLayout::validate() const {
  if (n_cf < 0 || mtc_count < 0 || n_cf + mtc_count > kTotalPreambles) {
    throw std::invalid_argument("PoolLayout: counts must fit the 64 preambles");
  }
}

PreamblePool PoolLayout::initial_pool() const {
  validate();
  PreamblePool pool;
  for (int p = 0; p < n_cf; ++p) pool.contention_free.insert(p);
  for (int p = n_cf; p < mtc_first(); ++p) pool.htc.insert(p);
  for (int p = mtc_first(); p < kTotalPreambles; ++p) pool.mtc_open.insert(p);
  return pool;
}

void Sib2Update::validate() const {
  if (slots_per_frame < 1 || slots_per_frame > 10) {
    throw std::invalid_argument("Sib2Update: slots_per_frame out of [1,10]");
  }
  if (m < 2) throw std::invalid_argument("Sib2Update: m must be >= 2");
  if (acb && (acb->p < 0.0 || acb->p > 1.0)) {
    throw std::invalid_argument("Sib2Update: ACB probability out of [0,1]");
  }
  if (virtual_frame_len < 1) {
    throw std::invalid_argument("Sib2Update: virtual frame length must be >= 1");
  }
  pool.validate();
}

void CrbConfig::validate() const {
  if (!(x < y)) throw std::invalid_argument("CrbConfig: thresholds require x < y");
  if (!(m0 < m_x && m_x < m_y)) throw std::invalid_argument("CrbConfig: requires m0 < m_x < m_y");
  if (m0 < 2) throw std::invalid_argument("CrbConfig: m0 must be >= 2");
  if (!(delta_x <= delta_y)) throw std::invalid_argument("CrbConfig: requires delta_x <= delta_y");
  if (delta_x < 0) throw std::invalid_argument("CrbConfig: deltas must be >= 0");
  if (virtual_frame_len < 1) throw std::invalid_argument("CrbConfig: virtual_frame_len >= 1");
  if (fixed_m && *fixed_m < 2) throw std::invalid_argument("CrbConfig: fixed m must be >= 2");
}

CollisionRate kappa_of(const std::vector<SlotOutcome>& outcomes) {
  int collided = 0;
  int successful = 0;
  for (const auto& o : outcomes) {
    collided += o.collision_count();
    successful += o.success_count();
  }
  return {static_cast<double>(collided) / std::max(1, successful)};
}

Device aloha_on_collision(Device d, std::optional<int> cap) {
  d.attempts_made += 1;
  d.consecutive_failures += 1;
  if (cap && d.attempts_made >= *cap) {
    d.phase = Phase::Outage;
  } else {
    d.phase = Phase::Ready;
  }
  return d;
}

Device acb_gate(Device d, double p, double barring_ms, double now_ms, Rng& rng) {
  if (rng.uniform() <= p) {
    d.phase = Phase::Ready;
  } else {
    d.phase = Phase::Barred;
    d.barred_until_ms = now_ms + barring_ms;
  }
  return d;
}

Device backoff_apply(Device d, double base_bi_ms, double now_ms, Rng& rng) {
  const int doublings = std::max(0, d.consecutive_failures - 1);
  const double bi = std::min(base_bi_ms * std::pow(2.0, doublings), 10.0 * base_bi_ms);
  d.next_eligible_ms = now_ms + rng.uniform() * bi;
  return d;
}

PreamblePool separation_partition(int total_contention, double mtc_fraction) {
  if (total_contention < 0 || total_contention > kTotalPreambles) {
    throw std::invalid_argument("separation_partition: contention count out of range");
  }
  if (mtc_fraction < 0.0 || mtc_fraction > 1.0) {
    throw std::invalid_argument("separation_partition: fraction out of [0,1]");
  }
  PoolLayout layout;
  layout.n_cf = kTotalPreambles - total_contention;
  layout.mtc_count = static_cast<int>(std::llround(mtc_fraction * total_contention));
  return layout.initial_pool();
}

int dynamic_allocation_step(CollisionRate kappa, int current_slots, const DynAllocPolicy& policy) {
  if (current_slots < 1 || current_slots > 10) {
    throw std::invalid_argument("dynamic_allocation_step: slots out of [1,10]");
  }
  int next = current_slots;
  if (kappa.kappa > policy.high_water) {
    next += policy.step_up;
  } else if (kappa.kappa < policy.low_water) {
    next -= policy.step_down;
  }
  return std::clamp(next, 1, 10);
}

CrbFrameUpdate crb_on_frame_end(const std::vector<SlotOutcome>& frame_outcomes,
                                const CrbConfig& cfg, CrbState& state, const PoolLayout& layout,
                                const std::function<bool(DeviceId)>& alive) {
  cfg.validate();
  layout.validate();
  CrbFrameUpdate update;

  // steps 4-8: collision rate drives (m, delta)
  const CollisionRate kappa = kappa_of(frame_outcomes);
  int delta = 0;
  if (kappa.kappa >= cfg.y) {
    state.current_m = cfg.m_y;
    delta = cfg.delta_y;
  } else if (kappa.kappa >= cfg.x) {
    state.current_m = cfg.m_x;
    delta = cfg.delta_x;
  } else {
    state.current_m = cfg.m0;
  }
  if (cfg.fixed_m) state.current_m = *cfg.fixed_m;
  if (!cfg.freeze_delta) {
    state.slots_per_frame = std::clamp(state.slots_per_frame + delta, 1, 10);
  }

  // step 9: a child node per MTC collision entry
  for (const auto& outcome : frame_outcomes) {
    for (const auto& [preamble, result] : outcome.per_preamble) {
      if (result.kind != PreambleResult::Kind::Collision) continue;
      if (result.pool == PoolKind::Htc) continue;  // HTCDs get no RAR, they re-initiate

      int level = 1;
      std::optional<int> parent;
      long long cohort = outcome.slot.frame * 100LL + outcome.slot.subframe;
      if (result.pool == PoolKind::Reserved) {
        auto it = state.nodes.find(result.node_id);
        if (it != state.nodes.end()) {
          level = it->second.level_d + 1;
          parent = result.node_id;
          cohort = it->second.root_cohort;
        }
      }

      std::vector<DeviceId> members;
      for (DeviceId dev : result.devices) {
        if (alive(dev)) members.push_back(dev);
      }
      if (members.size() == 1) {
        update.released.push_back(members.front());
        continue;
      }
      if (members.size() < 2) continue;

      ContentionTreeNode node;
      node.node_id = state.next_node_id++;
      node.members = members;
      node.level_d = level;
      node.parent = parent;
      node.split_m = state.current_m;
      node.root_cohort = cohort;
      const int demand = (state.cohort_level_demand[{cohort, level}] += node.split_m);
      auto& mx = state.max_demand_per_level[level];
      mx = std::max(mx, demand);
      for (DeviceId dev : members) update.rar_assignments[dev] = node.node_id;
      state.pending_fifo.push_back(node.node_id);
      state.nodes.emplace(node.node_id, std::move(node));
    }
  }

  // nodes that held a reserved set this frame are resolved: their members
  // either decoded or moved into children created above
  for (auto it = state.nodes.begin(); it != state.nodes.end();) {
    if (it->second.status == ContentionTreeNode::Status::Resolving) {
      it = state.nodes.erase(it);
    } else {
      ++it;
    }
  }

  // step 10/11: grant reserved sets FIFO while the MTC pool has room
  int next_free = layout.mtc_first();
  const int mtc_end = kTotalPreambles;
  PreamblePool pool = layout.initial_pool();
  pool.mtc_open.clear();
  while (!state.pending_fifo.empty()) {
    ContentionTreeNode& node = state.nodes.at(state.pending_fifo.front());
    if (mtc_end - next_free < node.split_m) break;  // defer, strictly FIFO
    node.reserved.clear();
    for (int i = 0; i < node.split_m; ++i) node.reserved.insert(next_free++);
    node.status = ContentionTreeNode::Status::Resolving;
    pool.reserved[node.node_id] = node.reserved;
    state.reserved_preamble_slots += node.split_m;
    update.scheduled_nodes.push_back(node.node_id);
    state.pending_fifo.pop_front();
  }
  for (int p = next_free; p < mtc_end; ++p) pool.mtc_open.insert(p);

  update.sib2.slots_per_frame = state.slots_per_frame;
  update.sib2.m = state.current_m;
  update.sib2.pool = std::move(pool);
  update.sib2.virtual_frame_len = cfg.virtual_frame_len;
  update.sib2.validate();
  return update;
}

std::set<PreambleId> crb_admission(const Device& d, const PreamblePool& pool) {
  if (d.phase == Phase::AssignedToTree) {
    auto it = pool.reserved.find(d.tree_node);
    if (it == pool.reserved.end()) return {};  // deferred node, wait
    return it->second;
  }
  return is_mtc(d.cls) ? pool.mtc_open : pool.htc;
}

}  // namespace rachsim
