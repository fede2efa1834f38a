#include "rachsim/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace rachsim::analytic {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("analytic: 64-bit capacity exceeded");
  }
  return out;
}

}  // namespace

double ra_opportunities_per_second(double preambles_per_slot, int slots_per_frame) {
  if (preambles_per_slot <= 0 || slots_per_frame <= 0) {
    throw std::invalid_argument("ra_opportunities_per_second: arguments must be > 0");
  }
  return preambles_per_slot * slots_per_frame * 100.0;
}

double collision_probability(double n, double opportunities_per_s, double window_s) {
  if (opportunities_per_s * window_s <= 0) {
    throw std::invalid_argument("collision_probability: R*T must be > 0");
  }
  if (n < 0) throw std::invalid_argument("collision_probability: n must be >= 0");
  return 1.0 - std::exp(-n / (opportunities_per_s * window_s));
}

std::int64_t codeword_count(int preambles_per_slot, int slots_per_frame) {
  if (preambles_per_slot < 1 || slots_per_frame < 1) {
    throw std::invalid_argument("codeword_count: M and L must be >= 1");
  }
  std::int64_t pow = 1;
  for (int i = 0; i < slots_per_frame; ++i) {
    pow = checked_mul(pow, preambles_per_slot + 1);
  }
  return pow - 1;
}

std::int64_t worst_case_reserved(int split_factor, int level, int root_pool_size) {
  if (split_factor < 2) throw std::invalid_argument("worst_case_reserved: m must be >= 2");
  if (level < 0) throw std::invalid_argument("worst_case_reserved: d must be >= 0");
  if (root_pool_size < 1) throw std::invalid_argument("worst_case_reserved: q must be >= 1");
  std::int64_t out = root_pool_size;
  for (int i = 0; i < level; ++i) {
    out = checked_mul(out, split_factor);
  }
  return out;
}

double expected_singletons(int attempts, int preambles) {
  if (attempts < 0) throw std::invalid_argument("expected_singletons: n must be >= 0");
  if (preambles < 1) throw std::invalid_argument("expected_singletons: k must be >= 1");
  if (attempts == 0) return 0.0;
  return attempts * std::pow(1.0 - 1.0 / preambles, attempts - 1);
}

}  // namespace rachsim::analytic
