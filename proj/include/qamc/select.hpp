// SPDX-License-Identifier: MIT
//
// Select oracles: given index wires y and payloads U_0..U_{M-1}, applies
// sum_x |x><x| (x) U_x (identity on index values >= M).
//
// Two emitters cover the ancilla/depth tradeoff:
//  - the recursive unary iterator walks the index tree with one flag cell
//    per level (m ancillas; the root flag is virtual, saving one), invoking
//    an arbitrary controlled payload at each live leaf sequentially;
//  - the one-hot router builds the full flag tree at once (about (4+L)M
//    ancillas for M Pauli strings on L wires), applies every payload through
//    XOR-fold column trees, and tears the tree down, for logarithmic depth
//    in M and L.
//
// synth_select_pauli splits the index into a low half handled recursively
// and a high half handled by controlled routers, sized to the ancilla
// budget.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qamc/circuit.hpp"
#include "qamc/pauli.hpp"

namespace qamc {

/// Generic payload: `emit` writes a single-controlled U_x onto the data
/// wires (exact identity when the control is |0>); n_anc declares the
/// worst-case ancilla use of one invocation.
struct ControlledImpl {
  uint32_t n_anc = 0;
  std::function<void(Circuit&, uint32_t, const std::vector<uint32_t>&)> emit;
};

/// Payload callback for the recursive select: receives the leaf index and a
/// flag wire that is |1> exactly on that leaf's branch; the emitted gates
/// must act as identity when the flag is |0>.
using LeafEmitter = std::function<void(Circuit&, uint64_t, uint32_t)>;

/// Recursive unary-iterate select over index wires (index[0] = MSB).
/// Invokes `leaf` for every leaf in [lo, hi) in ascending order; subtrees
/// outside the range cost nothing.  With empty index wires, runs leaf 0
/// under an always-on flag.
void emit_select_recursive(Circuit& c, const std::vector<uint32_t>& index,
                           uint64_t lo, uint64_t hi, const LeafEmitter& leaf);

/// One-hot router select applying Pauli strings to `data`.  The string for
/// router leaf i is strings[base + i*stride]; leaves with base + i*stride >=
/// strings.size() are pruned.  With `ctrl`, the whole select is additionally
/// controlled (exact identity on |0>).
void emit_select_pauli_router(Circuit& c, const std::vector<uint32_t>& index,
                              const std::vector<uint32_t>& data,
                              const std::vector<PauliString>& strings,
                              uint64_t base, uint64_t stride,
                              std::optional<uint32_t> ctrl = {});

/// Budget-adaptive Pauli select: the index splits into m_a high bits routed
/// one-hot and m_b = m - m_a low bits iterated recursively, with
/// m_a = min(m, ceil(log2((n_anc+1)/(4+L)))).  Identity on index >= M.
void emit_select_pauli(Circuit& c, const std::vector<uint32_t>& index,
                       const std::vector<uint32_t>& data,
                       const std::vector<PauliString>& strings, uint32_t n_anc,
                       std::optional<uint32_t> ctrl = {});

/// Sequential select over exactly 2^m generic payloads; index register on
/// wires [0, m), data register on wires [m, m + l).
Circuit synth_select_recursive(const std::vector<ControlledImpl>& impls,
                               uint32_t m, uint32_t l);

/// One-hot-routed select over exactly 2^m generic payloads; requires
/// n_anc >= M(4+r)-1 where r is the largest declared payload ancilla use.
Circuit synth_select_router(const std::vector<ControlledImpl>& impls,
                            uint32_t m, uint32_t l, uint32_t n_anc);

/// Budget-adaptive Pauli-string select; up to 2^m strings (trailing index
/// values act as identity).  Registers "index" = [0, m), "data" = [m, m+l).
Circuit synth_select_pauli(uint32_t m, uint32_t l,
                           const std::vector<PauliString>& strings,
                           uint32_t n_anc);

}  // namespace qamc
