#include <doctest.h>

#include <cmath>

#include "rachsim/schemes.hpp"

using namespace rachsim;

namespace {

SlotOutcome make_outcome(int collisions, int successes) {
  SlotOutcome out;
  int p = 0;
  for (int i = 0; i < collisions; ++i) {
    PreambleResult r;
    r.kind = PreambleResult::Kind::Collision;
    r.devices = {2 * i, 2 * i + 1};
    out.per_preamble[p++] = r;
  }
  for (int i = 0; i < successes; ++i) {
    PreambleResult r;
    r.kind = PreambleResult::Kind::Success;
    r.device = 1000 + i;
    out.per_preamble[p++] = r;
  }
  return out;
}

}  // namespace

TEST_CASE("collision handling counts the attempt and applies the cap") {
  Device d;
  d.attempts_made = 3;
  d.phase = Phase::Ready;
  d = aloha_on_collision(d, 10);
  CHECK(d.attempts_made == 4);
  CHECK(d.phase == Phase::Ready);

  Device e;
  e.attempts_made = 9;
  e = aloha_on_collision(e, 10);
  CHECK(e.attempts_made == 10);
  CHECK(e.phase == Phase::Outage);

  Device f;
  f.attempts_made = 50;
  f = aloha_on_collision(f, std::nullopt);  // uncapped
  CHECK(f.attempts_made == 51);
  CHECK(f.phase == Phase::Ready);
}

TEST_CASE("ACB gate: pass rate tracks p, barring sets the timer") {
  Rng rng(17);
  Device d;
  d = acb_gate(d, 1.0, 4000.0, 100.0, rng);
  CHECK(d.phase == Phase::Ready);
  d = acb_gate(d, 0.0, 4000.0, 100.0, rng);
  CHECK(d.phase == Phase::Barred);
  CHECK(d.barred_until_ms == doctest::Approx(4100.0));

  int passed = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    Device x;
    x = acb_gate(x, 0.3, 4000.0, 0.0, rng);
    passed += x.phase == Phase::Ready;
  }
  const double se = std::sqrt(0.3 * 0.7 / trials);
  CHECK(std::abs(passed / static_cast<double>(trials) - 0.3) < 5.0 * se);
}

TEST_CASE("backoff: uniform draw on a doubling window capped at 10x") {
  Rng rng(23);
  for (int failures = 1; failures <= 8; ++failures) {
    Device d;
    d.consecutive_failures = failures;
    const double base = 20.0;
    const double bi = std::min(base * std::pow(2.0, failures - 1), 10.0 * base);
    for (int i = 0; i < 200; ++i) {
      Device x = backoff_apply(d, base, 1000.0, rng);
      CHECK(x.next_eligible_ms >= 1000.0);
      CHECK(x.next_eligible_ms < 1000.0 + bi);
    }
  }
}

TEST_CASE("resource separation splits the contention range by the fraction") {
  PreamblePool pool = separation_partition(54, 0.3);
  CHECK_NOTHROW(pool.validate());
  CHECK(pool.mtc_open.size() == 16);  // round(0.3 * 54)
  CHECK(pool.htc.size() == 38);
  CHECK(pool.contention_free.size() == 10);

  CHECK(separation_partition(54, 0.0).mtc_open.empty());
  CHECK(separation_partition(54, 1.0).htc.empty());
  CHECK_THROWS_AS(separation_partition(54, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(separation_partition(-1, 0.5), std::invalid_argument);
}

TEST_CASE("kappa: collided over successful preambles, denominator floored") {
  CHECK(kappa_of({make_outcome(6, 3)}).kappa == doctest::Approx(2.0));
  CHECK(kappa_of({make_outcome(4, 0)}).kappa == doctest::Approx(4.0));  // floor at 1
  CHECK(kappa_of({make_outcome(0, 5)}).kappa == doctest::Approx(0.0));
  CHECK(kappa_of({make_outcome(2, 2), make_outcome(4, 1)}).kappa == doctest::Approx(2.0));
  CHECK(kappa_of({}).kappa == doctest::Approx(0.0));
}

TEST_CASE("dynamic allocation stepping is total and clamped") {
  DynAllocPolicy policy;
  for (double kappa : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 2.5, 100.0}) {
    for (int slots = 1; slots <= 10; ++slots) {
      const int next = dynamic_allocation_step({kappa}, slots, policy);
      CHECK(next >= 1);
      CHECK(next <= 10);
    }
  }
  CHECK(dynamic_allocation_step({3.0}, 2, policy) == 4);
  CHECK(dynamic_allocation_step({3.0}, 9, policy) == 10);   // clamp up
  CHECK(dynamic_allocation_step({0.1}, 2, policy) == 1);
  CHECK(dynamic_allocation_step({0.1}, 1, policy) == 1);    // clamp down
  CHECK(dynamic_allocation_step({1.0}, 5, policy) == 5);    // between the waters
  CHECK_THROWS_AS(dynamic_allocation_step({1.0}, 0, policy), std::invalid_argument);
}

TEST_CASE("CRB config invariants produce named errors") {
  CrbConfig ok;
  CHECK_NOTHROW(ok.validate());

  CrbConfig bad = ok;
  bad.m0 = 5;  // violates m0 < m_x < m_y with m_x = 4
  CHECK_THROWS_WITH_AS(bad.validate(), "CrbConfig: requires m0 < m_x < m_y",
                       std::invalid_argument);
  bad = ok;
  bad.x = 3.0;
  CHECK_THROWS_WITH_AS(bad.validate(), "CrbConfig: thresholds require x < y",
                       std::invalid_argument);
  bad = ok;
  bad.delta_x = 3;  // delta_y = 2
  CHECK_THROWS_WITH_AS(bad.validate(), "CrbConfig: requires delta_x <= delta_y",
                       std::invalid_argument);
}

TEST_CASE("CRB frame end: thresholds pick (m, delta)") {
  CrbConfig cfg;  // x=0.5 y=2.0 m0=3 m_x=4 m_y=6 dx=1 dy=2
  PoolLayout layout;
  auto alive = [](DeviceId) { return true; };

  SUBCASE("low collision rate: m0, no extra slots") {
    CrbState st;
    auto upd = crb_on_frame_end({make_outcome(1, 10)}, cfg, st, layout, alive);
    CHECK(st.current_m == 3);
    CHECK(upd.sib2.slots_per_frame == 2);
  }
  SUBCASE("mid collision rate: m_x and delta_x") {
    CrbState st;
    auto upd = crb_on_frame_end({make_outcome(10, 10)}, cfg, st, layout, alive);
    CHECK(st.current_m == 4);
    CHECK(upd.sib2.slots_per_frame == 3);
  }
  SUBCASE("high collision rate: m_y and delta_y") {
    CrbState st;
    auto upd = crb_on_frame_end({make_outcome(30, 2)}, cfg, st, layout, alive);
    CHECK(st.current_m == 6);
    CHECK(upd.sib2.slots_per_frame == 4);
  }
  SUBCASE("freeze_delta pins the slot density, fixed_m pins m") {
    CrbConfig frozen = cfg;
    frozen.freeze_delta = true;
    frozen.fixed_m = 4;
    CrbState st;
    auto upd = crb_on_frame_end({make_outcome(30, 2)}, frozen, st, layout, alive);
    CHECK(st.current_m == 4);
    CHECK(upd.sib2.slots_per_frame == 2);
  }
}

TEST_CASE("CRB frame end: node creation, release and FIFO scheduling") {
  CrbConfig cfg;
  cfg.fixed_m = 4;
  PoolLayout layout;  // 30 MTC preambles
  auto alive = [](DeviceId) { return true; };

  SUBCASE("each MTC collision entry becomes a scheduled level-1 node") {
    CrbState st;
    SlotOutcome out;
    PreambleResult r;
    r.kind = PreambleResult::Kind::Collision;
    r.pool = PoolKind::MtcOpen;
    r.devices = {1, 2, 3};
    out.per_preamble[40] = r;
    auto upd = crb_on_frame_end({out}, cfg, st, layout, alive);
    REQUIRE(upd.scheduled_nodes.size() == 1);
    const ContentionTreeNode& node = st.nodes.at(upd.scheduled_nodes[0]);
    CHECK(node.level_d == 1);
    CHECK(node.members == std::vector<DeviceId>{1, 2, 3});
    CHECK(node.reserved.size() == 4);
    CHECK(upd.rar_assignments.at(1) == node.node_id);
    CHECK(upd.rar_assignments.at(3) == node.node_id);
    CHECK_NOTHROW(upd.sib2.pool.validate());
    // reserved sets are carved out of the MTC range
    for (PreambleId p : node.reserved) CHECK(p >= layout.mtc_first());
    CHECK(upd.sib2.pool.mtc_open.size() == 26);
  }

  SUBCASE("a sole surviving member is released, not re-treed") {
    CrbState st;
    SlotOutcome out;
    PreambleResult r;
    r.kind = PreambleResult::Kind::Collision;
    r.pool = PoolKind::MtcOpen;
    r.devices = {5, 6};
    out.per_preamble[40] = r;
    auto upd = crb_on_frame_end({out}, cfg, st, layout,
                                [](DeviceId id) { return id == 5; });
    CHECK(upd.released == std::vector<DeviceId>{5});
    CHECK(upd.scheduled_nodes.empty());
    CHECK(st.nodes.empty());
  }

  SUBCASE("demand beyond the MTC pool is deferred strictly FIFO") {
    CrbState st;
    SlotOutcome out;
    for (int i = 0; i < 9; ++i) {  // 9 nodes x m=4 = 36 > 30
      PreambleResult r;
      r.kind = PreambleResult::Kind::Collision;
      r.pool = PoolKind::MtcOpen;
      r.devices = {10 * i, 10 * i + 1};
      out.per_preamble[34 + i] = r;
    }
    auto upd = crb_on_frame_end({out}, cfg, st, layout, alive);
    CHECK(upd.scheduled_nodes.size() == 7);  // 28 preambles fit
    CHECK(st.pending_fifo.size() == 2);
    CHECK(upd.sib2.pool.mtc_open.size() == 2);
    CHECK_NOTHROW(upd.sib2.pool.validate());
    // scheduled in creation order
    for (std::size_t i = 1; i < upd.scheduled_nodes.size(); ++i) {
      CHECK(upd.scheduled_nodes[i] > upd.scheduled_nodes[i - 1]);
    }
    // deferred nodes are scheduled first on the next frame
    auto upd2 = crb_on_frame_end({}, cfg, st, layout, alive);
    CHECK(upd2.scheduled_nodes == std::vector<int>{7, 8});
  }

  SUBCASE("a collision inside a reserved set creates a deeper child") {
    CrbState st;
    SlotOutcome out1;
    PreambleResult r;
    r.kind = PreambleResult::Kind::Collision;
    r.pool = PoolKind::MtcOpen;
    r.devices = {1, 2, 3};
    out1.per_preamble[40] = r;
    auto upd1 = crb_on_frame_end({out1}, cfg, st, layout, alive);
    const int parent = upd1.scheduled_nodes.at(0);

    SlotOutcome out2;
    PreambleResult r2;
    r2.kind = PreambleResult::Kind::Collision;
    r2.pool = PoolKind::Reserved;
    r2.node_id = parent;
    r2.devices = {1, 2};
    out2.per_preamble[*st.nodes.at(parent).reserved.begin()] = r2;
    auto upd2 = crb_on_frame_end({out2}, cfg, st, layout, alive);
    REQUIRE(upd2.scheduled_nodes.size() == 1);
    const ContentionTreeNode& child = st.nodes.at(upd2.scheduled_nodes[0]);
    CHECK(child.level_d == 2);
    CHECK(child.parent == parent);
    // the parent's reservation is gone
    CHECK(st.nodes.count(parent) == 0);
  }
}

TEST_CASE("CRB admission: deferred nodes yield no preambles") {
  PreamblePool pool = PoolLayout{}.initial_pool();
  pool.reserved[3] = {60, 61, 62};
  for (PreambleId p : pool.reserved[3]) pool.mtc_open.erase(p);

  Device d;
  d.cls = DeviceClass::MtcLowPriority;
  d.phase = Phase::AssignedToTree;
  d.tree_node = 3;
  CHECK(crb_admission(d, pool) == pool.reserved[3]);
  d.tree_node = 4;
  CHECK(crb_admission(d, pool).empty());
  d.phase = Phase::Ready;
  CHECK(crb_admission(d, pool) == pool.mtc_open);
  Device h = d;
  h.cls = DeviceClass::Htc;
  CHECK(crb_admission(h, pool) == pool.htc);
}
