// SPDX-License-Identifier: MIT
//
// Reusable multi-qubit gadgets emitted over the elementary gate set:
// Toffoli, Y via Cliffords, swap, AND ladders/trees, fanout and XOR-fold
// trees, and the phase-immune controlled-rotation form.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qamc/circuit.hpp"
#include "qamc/pauli.hpp"

namespace qamc {

/// Y = S X S+ exactly (no global-phase slack).
void emit_y(Circuit& c, uint32_t q);

/// Standard 15-gate, 7-T Toffoli.
void emit_toffoli(Circuit& c, uint32_t a, uint32_t b, uint32_t t);

/// Toffoli with selectable control polarities (false = trigger on |0>),
/// realized by X-conjugating the negated controls.
void emit_toffoli_pol(Circuit& c, uint32_t a, bool pa, uint32_t b, bool pb,
                      uint32_t t);

/// SWAP as three CNOTs.
void emit_swap(Circuit& c, uint32_t a, uint32_t b);

/// Controlled rotation in the phase-immune form
///   u(theta/2) . CNOT . u(theta/2)^dagger . CNOT
/// (reading left to right in circuit order).  Any global phase picked up by a
/// synthesized replacement of u cancels against its dagger, for both axes.
/// Each abstract half carries accuracy eps/2.
void emit_controlled_rotation(Circuit& c, GateKind axis, double angle,
                              double eps, uint32_t ctrl, uint32_t target);

/// Multiplexed rotation: applies R_axis(angle) to `target` exactly on the
/// branch where wires `controls` spell the bit pattern `pattern`
/// (controls[0] = most significant pattern bit) and identity elsewhere.
/// Uses an AND ladder over scratch ancillas for >= 2 controls.  The abstract
/// rotations inside carry a total accuracy budget of eps.
void emit_multiplexed_rotation(Circuit& c, GateKind axis, double angle,
                               double eps,
                               const std::vector<uint32_t>& controls,
                               uint64_t pattern, uint32_t target);

/// AND of all (possibly polarity-adjusted) literals into a freshly allocated
/// flag ancilla via a balanced Toffoli tree; returns the flag wire and the
/// scratch wires that `unwind` must release.  literals.size() >= 2.
struct AndTree {
  uint32_t flag = 0;
  std::vector<uint32_t> scratch;  // includes flag as the last element
};
AndTree emit_and_tree(Circuit& c, const std::vector<uint32_t>& wires,
                      const std::vector<bool>& polarity);
void emit_and_tree_inverse(Circuit& c, const std::vector<uint32_t>& wires,
                           const std::vector<bool>& polarity,
                           const AndTree& tree);

/// CNOT-doubling fanout: copies `src` into each wire of `dst` (all |0>),
/// depth ceil(log2(|dst|+1)).
void emit_fanout(Circuit& c, uint32_t src, const std::vector<uint32_t>& dst);
void emit_fanout_inverse(Circuit& c, uint32_t src,
                         const std::vector<uint32_t>& dst);

/// XOR-fold: CNOT-tree folds the parity of `wires` into wires[0] (depth
/// ceil(log2 n)); `apply` receives the fold root; the fold is then undone.
template <typename Fn>
void with_xor_fold(Circuit& c, const std::vector<uint32_t>& wires, Fn apply) {
  const size_t n = wires.size();
  if (n == 0) return;
  std::vector<std::pair<uint32_t, uint32_t>> folds;
  for (size_t gap = 1; gap < n; gap *= 2)
    for (size_t i = 0; i + gap < n; i += 2 * gap)
      folds.emplace_back(wires[i + gap], wires[i]);
  for (auto [s, t] : folds) c.cnot(s, t);
  apply(wires[0]);
  for (auto it = folds.rbegin(); it != folds.rend(); ++it)
    c.cnot(it->first, it->second);
}

/// Applies the Pauli string controlled on `ctrl`: letter l acts on
/// targets[l].  CX / CY = (I⊗S)CX(I⊗S+) / CZ = (I⊗H)CX(I⊗H) letterwise,
/// and the i^kappa prefactor becomes S^kappa on the control.
void emit_controlled_pauli(Circuit& c, const PauliString& p, uint32_t ctrl,
                           const std::vector<uint32_t>& targets);

/// Applies the Pauli string unconditionally; the i^kappa prefactor goes into
/// the circuit's global-phase scalar.
void emit_pauli(Circuit& c, const PauliString& p,
                const std::vector<uint32_t>& targets);

}  // namespace qamc
