#include "rachsim/core.hpp"

#include <algorithm>

namespace rachsim {

namespace {
constexpr std::array<int, 16> kSlotsPerFrameTable = {
    1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 5, 5, 10, 10};
}

int prach_slots_per_frame(int config_index) {
  if (config_index < 0 || config_index >= static_cast<int>(kSlotsPerFrameTable.size())) {
    throw std::invalid_argument("prach_slots_per_frame: configuration index " +
                                std::to_string(config_index) + " out of [0,15]");
  }
  return kSlotsPerFrameTable[config_index];
}

std::vector<int> ra_subframes(int slots_per_frame) {
  if (slots_per_frame < 1 || slots_per_frame > 10) {
    throw std::invalid_argument("ra_subframes: slots per frame out of [1,10]");
  }
  std::vector<int> out;
  out.reserve(slots_per_frame);
  for (int j = 0; j < slots_per_frame; ++j) {
    out.push_back(j * 10 / slots_per_frame);
  }
  return out;
}

void PreamblePool::validate() const {
  std::array<int, kTotalPreambles> seen{};
  auto mark = [&](const std::set<PreambleId>& s, const char* name) {
    for (PreambleId p : s) {
      if (p < 0 || p >= kTotalPreambles) {
        throw std::logic_error(std::string("PreamblePool: ") + name +
                               " contains index outside [0,63]");
      }
      if (seen[p]++) {
        throw std::logic_error(std::string("PreamblePool: preamble ") +
                               std::to_string(p) + " appears in more than one part");
      }
    }
  };
  mark(contention_free, "contention_free");
  mark(htc, "htc");
  mark(mtc_open, "mtc_open");
  for (const auto& [node, s] : reserved) {
    mark(s, "reserved");
  }
}

std::pair<PoolKind, int> PreamblePool::classify(PreambleId p) const {
  if (contention_free.count(p)) return {PoolKind::ContentionFree, -1};
  if (htc.count(p)) return {PoolKind::Htc, -1};
  if (mtc_open.count(p)) return {PoolKind::MtcOpen, -1};
  for (const auto& [node, s] : reserved) {
    if (s.count(p)) return {PoolKind::Reserved, node};
  }
  throw std::logic_error("PreamblePool: preamble " + std::to_string(p) +
                         " not present in any part");
}

std::set<PreambleId> PreamblePool::contention_set() const {
  std::set<PreambleId> out = htc;
  out.insert(mtc_open.begin(), mtc_open.end());
  for (const auto& [node, s] : reserved) out.insert(s.begin(), s.end());
  return out;
}

int SlotOutcome::idle_count() const {
  int n = 0;
  for (const auto& [p, r] : per_preamble) n += r.kind == PreambleResult::Kind::Idle;
  return n;
}

int SlotOutcome::success_count() const {
  int n = 0;
  for (const auto& [p, r] : per_preamble) n += r.kind == PreambleResult::Kind::Success;
  return n;
}

int SlotOutcome::collision_count() const {
  int n = 0;
  for (const auto& [p, r] : per_preamble) n += r.kind == PreambleResult::Kind::Collision;
  return n;
}

void AnalyticParams::validate() const {
  if (attempt_count <= 0 || opportunities_per_s <= 0 || window_s <= 0 ||
      preambles_per_slot <= 0 || slots_per_virtual_frame <= 0 || root_pool_size <= 0 ||
      tree_level < 0) {
    throw std::invalid_argument("AnalyticParams: all parameters must be positive");
  }
  if (split_factor < 2) {
    throw std::invalid_argument("AnalyticParams: split factor m must be >= 2");
  }
}

const std::set<PreambleId>* eligible_pool(const Device& d, const PreamblePool& pool) {
  if (d.phase == Phase::AssignedToTree) {
    auto it = pool.reserved.find(d.tree_node);
    if (it == pool.reserved.end() || it->second.empty()) return nullptr;  // deferred node
    return &it->second;
  }
  const std::set<PreambleId>& s = is_mtc(d.cls) ? pool.mtc_open : pool.htc;
  return s.empty() ? nullptr : &s;
}

PreambleId select_preamble(const Device& d, const PreamblePool& pool, Rng& rng) {
  const std::set<PreambleId>* s = eligible_pool(d, pool);
  if (s == nullptr) {
    throw PoolExhaustedError("select_preamble: device " + std::to_string(d.id) +
                             " has no eligible preambles");
  }
  auto it = s->begin();
  std::advance(it, static_cast<long>(rng.index(s->size())));
  return *it;
}

SlotOutcome resolve_slot(const std::vector<std::pair<DeviceId, PreambleId>>& attempts,
                         RaSlotAddress slot, const PreamblePool& pool) {
  SlotOutcome out;
  out.slot = slot;
  for (PreambleId p : pool.contention_set()) {
    PreambleResult r;
    auto [kind, node] = pool.classify(p);
    r.pool = kind;
    r.node_id = node;
    out.per_preamble.emplace(p, std::move(r));
  }

  std::set<DeviceId> seen;
  for (const auto& [dev, p] : attempts) {
    if (!seen.insert(dev).second) {
      throw std::invalid_argument("resolve_slot: device " + std::to_string(dev) +
                                  " attempts twice in one slot");
    }
    auto it = out.per_preamble.find(p);
    if (it == out.per_preamble.end()) {
      throw std::invalid_argument("resolve_slot: preamble " + std::to_string(p) +
                                  " is not a contention preamble of this pool");
    }
    it->second.devices.push_back(dev);
  }

  for (auto& [p, r] : out.per_preamble) {
    if (r.devices.empty()) {
      r.kind = PreambleResult::Kind::Idle;
    } else if (r.devices.size() == 1) {
      r.kind = PreambleResult::Kind::Success;
      r.device = r.devices.front();
      r.devices.clear();
    } else {
      r.kind = PreambleResult::Kind::Collision;
      std::sort(r.devices.begin(), r.devices.end());
    }
  }
  return out;
}

}  // namespace rachsim
