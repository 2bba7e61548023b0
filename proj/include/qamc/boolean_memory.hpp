// SPDX-License-Identifier: MIT
//
// Sparse Boolean memory Select(B): |q>|z> -> |q>|z XOR B(q)> for a function
// B that is nonzero on s inputs, built from per-entry AND-tree conjunction
// flags fanned onto the word bits.  Entries are processed in serial groups
// of w = max(1, min(s, n_anc / n)); larger budgets widen the groups (one
// group computes every flag in parallel on fanned-out index copies).
//
// On top of it, the sparse-access oracles for an integer matrix H with
// d-digit entries and row/column sparsity s:
//   O_H: |x,y>|z> -> |x,y>|z XOR H_{x,y}>
//   O_F: |x,k>    -> |x,F(x,k)>  with F(x,.) completed to a permutation.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qamc/circuit.hpp"

namespace qamc {

struct SbmEntry {
  uint64_t q = 0;  // index value
  uint64_t b = 0;  // word value (entries with b = 0 contribute nothing)
};

/// Emits Select(B) over explicit wires; bit j of an entry's b targets
/// word[j].  With ctrl, the whole memory is additionally controlled.
void emit_sbm(Circuit& c, const std::vector<uint32_t>& idx,
              const std::vector<uint32_t>& word,
              const std::vector<SbmEntry>& entries, uint32_t n_anc,
              std::optional<uint32_t> ctrl = {});

/// Standalone memory on registers "index" = wires [0, n) (index MSB first)
/// and "word" = wires [n, n + word_bits) (bit j of B on wire n + j).
Circuit synth_sbm(uint32_t n, uint32_t word_bits,
                  const std::vector<SbmEntry>& entries, uint32_t n_anc);

struct IntMatrixEntry {
  uint64_t row = 0;
  uint64_t col = 0;
  uint64_t val = 0;
};

/// 2^n x 2^n matrix of d-digit nonnegative integers with at most s nonzero
/// entries per row and per column.  Zero-valued entries are treated as
/// absent.
struct IntMatrix {
  uint32_t n = 0;
  uint32_t d = 0;
  uint32_t s = 0;
  std::vector<IntMatrixEntry> entries;

  /// Sorts entries by (row, col), drops zero values, and checks all
  /// invariants (ranges, duplicates, sparsity).
  void normalize();
};

/// Element oracle: registers "x" = [0, n), "y" = [n, 2n), "word" =
/// [2n, 2n + d) with bit j of H_{x,y} on wire 2n + j.
Circuit synth_oh(const IntMatrix& a, uint32_t n_anc);

/// Position oracle |x,k> -> |x,F(x,k)> on registers "x" = [0, n) and
/// "k" = [n, 2n); F(x,.) maps k < s_x to the k-th nonzero column of row x in
/// ascending order and completes the remaining k ascending onto the
/// remaining columns, making it a permutation.
Circuit synth_of(const IntMatrix& a, uint32_t n_anc);

}  // namespace qamc
