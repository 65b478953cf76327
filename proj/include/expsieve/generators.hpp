#pragma once

#include <cstdint>

#include "expsieve/expsums.hpp"

namespace expsieve {

// Deterministic sequence/weight families for experiments. Randomized ones run
// on mt19937_64 with explicit seeds and draw bounded values by plain modulo,
// so identical seeds give identical artifacts on any conforming platform.

SparseSequence make_arithmetic_sequence(uint64_t T, uint64_t start, uint64_t step, uint64_t S);

// Exponents hugging a geometric curve from 0 to S (strictly increasing, so it
// needs S >= T-1); ratio > 1 controls how fast the gaps grow.
SparseSequence make_geometric_gap_sequence(uint64_t T, double ratio, uint64_t S);

// Uniform random T-subset of {0, ..., S} by Floyd's sampling, sorted.
SparseSequence make_random_subset_sequence(uint64_t T, uint64_t S, uint64_t seed);

WeightSequence make_unit_weights(uint64_t T);
WeightSequence make_random_sign_weights(uint64_t T, uint64_t seed);   // +1 / -1
WeightSequence make_random_phase_weights(uint64_t T, uint64_t seed);  // e^(i*theta), theta uniform

} // namespace expsieve
