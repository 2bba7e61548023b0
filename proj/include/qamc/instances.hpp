// SPDX-License-Identifier: MIT
//
// Seeded instance generators shared by the sweep driver and the acceptance
// harness.  All draws go through Rand's bit-stable helpers (no
// std::uniform_*), so a fixed seed yields identical instances on every
// platform and standard library.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qamc/block_encoding.hpp"
#include "qamc/boolean_memory.hpp"
#include "qamc/pauli.hpp"
#include "qamc/state_prep.hpp"

namespace qamc {

struct Rand {
  std::mt19937_64 rng;
  explicit Rand(uint64_t seed) : rng(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
  }
  double sym() { return unit() * 2.0 - 1.0; }  // [-1, 1)
  uint64_t below(uint64_t n) { return n ? rng() % n : 0; }
};

/// Haar-ish dense state: i.i.d. symmetric components, normalized.
AmplitudeVector random_dense_state(Rand& r, uint32_t n);

/// s distinct indices with normalized random complex amplitudes.
AmplitudeVector random_sparse_state(Rand& r, uint32_t n, uint32_t s);

/// `count` strings of l letters each, letters and sign prefactor random.
std::vector<PauliString> random_pauli_strings(Rand& r, uint32_t l,
                                              uint32_t count);

/// s entries at distinct indices with nonzero words of `word_bits` bits.
std::vector<SbmEntry> random_sbm_entries(Rand& r, uint32_t n,
                                         uint32_t word_bits, uint32_t s);

/// Overlay of s random permutations of [0, 2^n) with random nonzero d-digit
/// values: row and column sparsity are both at most s by construction.
IntMatrix random_int_matrix(Rand& r, uint32_t n, uint32_t d, uint32_t s);

/// p terms with positive coefficients and random non-identity strings.
LcuSpec random_lcu(Rand& r, uint32_t n, uint32_t p);

/// s random complex entries per row at distinct columns.
SparseMatrixCOO random_sparse_matrix(Rand& r, uint32_t n, uint32_t s);

}  // namespace qamc
