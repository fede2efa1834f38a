#pragma once

#include <cstdint>

namespace rachsim::analytic {

// Contention opportunities per second: preambles per slot x slots per frame
// x 100 radio frames. Fractional preamble shares (e.g. a 30% MTC split of 54)
// are kept fractional here even though a simulated pool must be integral.
double ra_opportunities_per_second(double preambles_per_slot, int slots_per_frame);

// 1 - exp(-n / (R*T)): collision probability for n attempts mixed uniformly
// over R*T opportunities.
double collision_probability(double n, double opportunities_per_s, double window_s);

// (M+1)^L - 1 codewords for L-slot virtual frames of M preambles.
// Throws std::overflow_error when the count does not fit in 64 bits.
std::int64_t codeword_count(int preambles_per_slot, int slots_per_frame);

// m^d * q: preambles a full collision demands at tree level d.
// Throws std::overflow_error on 64-bit overflow.
std::int64_t worst_case_reserved(int split_factor, int level, int root_pool_size);

// n * (1 - 1/k)^(n-1): expected singleton count for n attempts over k preambles.
double expected_singletons(int attempts, int preambles);

}  // namespace rachsim::analytic
