#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rachsim/core.hpp"
#include "rachsim/schemes.hpp"

using namespace rachsim;

TEST_CASE("prach table pins the densities used by the studies") {
  CHECK(prach_slots_per_frame(0) == 1);
  CHECK(prach_slots_per_frame(6) == 2);
  CHECK(prach_slots_per_frame(9) == 3);
  CHECK(prach_slots_per_frame(12) == 5);
  CHECK(prach_slots_per_frame(14) == 10);
  CHECK(prach_slots_per_frame(15) == 10);
  CHECK_THROWS_AS(prach_slots_per_frame(-1), std::invalid_argument);
  CHECK_THROWS_AS(prach_slots_per_frame(16), std::invalid_argument);
}

TEST_CASE("ra slots are evenly spaced within the frame") {
  CHECK(ra_subframes(1) == std::vector<int>{0});
  CHECK(ra_subframes(2) == std::vector<int>{0, 5});
  CHECK(ra_subframes(5) == std::vector<int>{0, 2, 4, 6, 8});
  CHECK(ra_subframes(10) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (int k = 1; k <= 10; ++k) {
    auto subs = ra_subframes(k);
    REQUIRE(subs.size() == static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < subs.size(); ++i) {
      CHECK(subs[i] >= 0);
      CHECK(subs[i] < 10);
      if (i > 0) CHECK(subs[i] > subs[i - 1]);
    }
  }
  CHECK_THROWS_AS(ra_subframes(0), std::invalid_argument);
  CHECK_THROWS_AS(ra_subframes(11), std::invalid_argument);
}

TEST_CASE("preamble pool partition is validated") {
  PreamblePool pool = PoolLayout{}.initial_pool();
  CHECK_NOTHROW(pool.validate());
  CHECK(pool.contention_free.size() == 10);
  CHECK(pool.htc.size() == 24);
  CHECK(pool.mtc_open.size() == 30);
  CHECK(pool.contention_set().size() == 54);

  SUBCASE("overlap between parts is rejected") {
    pool.htc.insert(*pool.mtc_open.begin());
    CHECK_THROWS_AS(pool.validate(), std::logic_error);
  }
  SUBCASE("out-of-range index is rejected") {
    pool.mtc_open.insert(64);
    CHECK_THROWS_AS(pool.validate(), std::logic_error);
  }
  SUBCASE("reserved sets participate in the partition") {
    pool.reserved[0] = {*pool.mtc_open.begin()};
    CHECK_THROWS_AS(pool.validate(), std::logic_error);
    pool.mtc_open.erase(*pool.reserved[0].begin());
    CHECK_NOTHROW(pool.validate());
    CHECK(pool.classify(*pool.reserved[0].begin()) ==
          std::pair<PoolKind, int>{PoolKind::Reserved, 0});
  }
}

TEST_CASE("eligibility follows class and tree assignment") {
  PreamblePool pool = PoolLayout{}.initial_pool();
  pool.reserved[7] = {60, 61, 62, 63};
  for (PreambleId p : pool.reserved[7]) pool.mtc_open.erase(p);
  pool.validate();

  Device mtc;
  mtc.cls = DeviceClass::MtcLowPriority;
  mtc.phase = Phase::Ready;
  CHECK(eligible_pool(mtc, pool) == &pool.mtc_open);

  Device htc;
  htc.cls = DeviceClass::Htc;
  htc.phase = Phase::Ready;
  CHECK(eligible_pool(htc, pool) == &pool.htc);

  Device treed = mtc;
  treed.phase = Phase::AssignedToTree;
  treed.tree_node = 7;
  CHECK(*eligible_pool(treed, pool) == pool.reserved[7]);

  Device deferred = treed;
  deferred.tree_node = 8;  // no reserved set this frame
  CHECK(eligible_pool(deferred, pool) == nullptr);

  PreamblePool empty_mtc = pool;
  empty_mtc.mtc_open.clear();
  CHECK(eligible_pool(mtc, empty_mtc) == nullptr);
  Rng rng(1);
  CHECK_THROWS_AS(select_preamble(mtc, empty_mtc, rng), PoolExhaustedError);
}

TEST_CASE("preamble selection is uniform over the eligible subset") {
  PreamblePool pool = PoolLayout{}.initial_pool();
  Device d;
  d.cls = DeviceClass::MtcLowPriority;
  d.phase = Phase::Ready;
  Rng rng(12345);
  const int k = static_cast<int>(pool.mtc_open.size());
  const int draws = 30000;
  std::map<PreambleId, int> counts;
  for (int i = 0; i < draws; ++i) {
    const PreambleId p = select_preamble(d, pool, rng);
    REQUIRE(pool.mtc_open.count(p) == 1);
    counts[p] += 1;
  }
  // chi-square against uniform; k-1 = 29 dof, mean 29, sd sqrt(58)
  const double expected = static_cast<double>(draws) / k;
  double chi2 = 0.0;
  for (const auto& [p, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 29.0 + 5.0 * std::sqrt(58.0));
  CHECK(chi2 > 29.0 - 5.0 * std::sqrt(58.0));
}

TEST_CASE("slot resolution: singletons succeed, groups collide, rest idle") {
  PreamblePool pool = PoolLayout{}.initial_pool();
  const PreambleId a = *pool.mtc_open.begin();
  const PreambleId b = *std::next(pool.mtc_open.begin());

  SUBCASE("one device alone succeeds") {
    auto out = resolve_slot({{5, a}}, {0, 0}, pool);
    CHECK(out.per_preamble.at(a).kind == PreambleResult::Kind::Success);
    CHECK(out.per_preamble.at(a).device == 5);
    CHECK(out.success_count() == 1);
    CHECK(out.collision_count() == 0);
    CHECK(out.idle_count() == 53);
  }
  SUBCASE("two devices on one preamble collide, members sorted") {
    auto out = resolve_slot({{9, a}, {2, a}, {4, b}}, {0, 0}, pool);
    CHECK(out.per_preamble.at(a).kind == PreambleResult::Kind::Collision);
    CHECK(out.per_preamble.at(a).devices == std::vector<DeviceId>{2, 9});
    CHECK(out.per_preamble.at(b).kind == PreambleResult::Kind::Success);
    CHECK(out.success_count() + out.collision_count() + out.idle_count() == 54);
  }
  SUBCASE("duplicate device in a slot is a contract violation") {
    CHECK_THROWS_AS(resolve_slot({{1, a}, {1, b}}, {0, 0}, pool), std::invalid_argument);
  }
  SUBCASE("attempting a contention-free preamble is a contract violation") {
    CHECK_THROWS_AS(resolve_slot({{1, 0}}, {0, 0}, pool), std::invalid_argument);
  }
}

TEST_CASE("slot-level collision fraction matches the balls-into-bins oracle") {
  // fraction of devices whose preamble was shared, vs 1-(1-1/k)^(n-1)
  PreamblePool pool = PoolLayout{}.initial_pool();
  Rng rng(777);
  const int k = static_cast<int>(pool.mtc_open.size());
  const int n = 20;
  const int trials = 4000;
  long long collided = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::pair<DeviceId, PreambleId>> attempts;
    Device d;
    d.cls = DeviceClass::MtcLowPriority;
    d.phase = Phase::Ready;
    for (int i = 0; i < n; ++i) attempts.emplace_back(i, select_preamble(d, pool, rng));
    auto out = resolve_slot(attempts, {0, 0}, pool);
    for (const auto& [p, r] : out.per_preamble) {
      if (r.kind == PreambleResult::Kind::Collision) collided += r.devices.size();
    }
  }
  const double observed = static_cast<double>(collided) / (static_cast<double>(n) * trials);
  const double expected = 1.0 - std::pow(1.0 - 1.0 / k, n - 1);
  // device collision outcomes within a slot are correlated, so pad the
  // binomial standard error instead of assuming independence
  const double se = std::sqrt(expected * (1.0 - expected) / (static_cast<double>(n) * trials));
  CHECK(std::abs(observed - expected) < 5.0 * se + 0.01);
}
