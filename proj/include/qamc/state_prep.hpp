// SPDX-License-Identifier: MIT
//
// Quantum state preparation in three ancilla regimes, plus sparse targets:
//  - UCR cascades: uniformly controlled Y- then Z-rotation layers, with a
//    scratch ladder for the multi-controlled rotations (few ancillas);
//  - binary amplitude tree: a path superposition over one-hot node layers,
//    copied onto the data register and uncomputed (O(2^n) ancillas);
//  - tunable hybrid: UCR on a prefix register plus a select of controlled
//    tree preparations on the suffix, sized to an ancilla budget;
//  - sparse targets: coefficient preparation, an X-string select writing the
//    occupied basis indices, and a Boolean-memory uncompute of the index
//    register.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qamc/circuit.hpp"

namespace qamc {

struct SparseAmplitude {
  uint64_t index = 0;
  cplx amp{0.0, 0.0};
};

/// A normalized target state, dense (2^n amplitudes, basis order, wire 0 =
/// most significant index bit) or sparse (distinct basis indices).
struct AmplitudeVector {
  uint32_t n = 0;
  bool sparse_form = false;
  std::vector<cplx> dense;
  std::vector<SparseAmplitude> sparse;

  static AmplitudeVector make_dense(uint32_t n, std::vector<cplx> amps);
  static AmplitudeVector make_sparse(uint32_t n,
                                     std::vector<SparseAmplitude> entries);

  /// SchemaError unless the form is well-shaped (dense: exactly 2^n entries,
  /// n <= 20; sparse: distinct in-range indices) and the Euclidean norm is
  /// within 1e-9 of one.
  void validate() const;

  /// Dense amplitudes regardless of stored form (requires n <= 20).
  std::vector<cplx> to_dense() const;
};

/// Rotation angles of the UCR cascade.  Layer j in 1..n holds one angle per
/// (j-1)-bit prefix k: ay[j-1][k] drives the magnitude split of the two
/// subtrees under prefix k, az[j-1][k] their phase difference.  psi00 is the
/// residual phase: the exact cascade product sends |0^n> to
/// e^{-i psi00} times the target.
struct UcrAngleTable {
  uint32_t n = 0;
  std::vector<std::vector<double>> ay;
  std::vector<std::vector<double>> az;
  double psi00 = 0.0;
};

UcrAngleTable ucr_angles(const AmplitudeVector& a);

/// Subtree amplitudes alpha[L][k] (level L = 0..n, alpha[n] = the target)
/// with the per-transition angles: theta[L][k] = atan2 of the child
/// magnitudes under node (L,k), phi[L][k] = half the phase difference of the
/// two children.  Zero-mass subtrees carry angle 0.
struct TreeAmplitudeTable {
  uint32_t n = 0;
  std::vector<std::vector<cplx>> alpha;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> phi;
};

TreeAmplitudeTable tree_amplitudes(const AmplitudeVector& a);

/// Per-layer accuracy allocation rules (these values are what the synthesis
/// wrappers record in the circuit budget ledger): UCR layer j of n receives
/// eps / 2^(n-j+2) shared by its Y and Z cascades, so the total stays within
/// eps; tree layer L of n receives (6/pi^2) eps / (n-L+1)^2.
double ucr_layer_eps(double eps, uint32_t n, uint32_t j);
double tree_layer_eps(double eps, uint32_t n, uint32_t L);

/// The emit-level builders append onto explicit wires (wires[0] = most
/// significant index bit) and return the phase deficit phi: taking abstract
/// rotations at face value, the emitted gates send |0..0> to e^{-i phi}
/// times the target.  With `ctrl` the construction is additionally
/// controlled: the ctrl = |0> branch is exactly the identity, and the
/// deficit is the relative phase of the ctrl = |1> branch (callers fold it
/// into whatever amplitude feeds the control).

/// Uniformly controlled rotation cascade (Y layers then Z layers).
/// Multi-controlled rotations with an exactly-zero angle are skipped, so the
/// target |0^n> produces no gates.  amps.size() must equal 2^wires.size().
double emit_state_ucr(Circuit& c, const std::vector<uint32_t>& wires,
                      const std::vector<cplx>& amps, double eps,
                      std::optional<uint32_t> ctrl = {});

/// Binary amplitude tree: stage 1 builds the path superposition with one
/// three-qubit w-gadget per parent node, stage 2 XOR-folds each layer's odd
/// (right-turn) nodes onto the data wires, stage 3 uncomputes the tree with
/// per-parent Toffoli pairs fed by fanned-out copies of the direction bits.
/// Without ctrl the root is virtual (layer-1 gadgets degenerate to
/// single-qubit form); with ctrl the control wire is the root.
/// `buffer_slack` caps the number of extra direction-bit copies alive at
/// once (UINT64_MAX = full parallel buffer).
double emit_state_tree(Circuit& c, const std::vector<uint32_t>& wires,
                       const std::vector<cplx>& amps, double eps,
                       std::optional<uint32_t> ctrl = {},
                       uint64_t buffer_slack = UINT64_MAX);

/// Sparse target: s = 1 writes the basis index with X/CNOT exactly;
/// otherwise prepares the coefficient state on ceil(log2 s) index ancillas
/// (UCR at eps/2), selects the X-string of each occupied index, and erases
/// the index register with a Boolean memory keyed on the data value.  The
/// two oracle stages are exact.  n_anc budgets the select/memory stages.
double emit_state_sparse(Circuit& c, const std::vector<uint32_t>& wires,
                         const std::vector<SparseAmplitude>& entries,
                         double eps, uint32_t n_anc,
                         std::optional<uint32_t> ctrl = {});

/// Standalone circuits on data wires [0, n) (register "data"), with the
/// deficit phase folded into the global-phase scalar so the prepared state
/// matches the target without phase slack on the prepared branch.  All
/// wrappers require 0 < eps < 1 (SchemaError otherwise).
Circuit synth_state_ucr(const AmplitudeVector& a, double eps);

/// With `controlled`, wire 0 is the external control (register "ctrl"),
/// data wires are [1, n+1), and control = |0> leaves the data at |0^n>; the
/// compensating scalar belongs to the ctrl = |1> branch.
Circuit synth_state_tree(const AmplitudeVector& a, double eps,
                         bool controlled = false);

/// Hybrid preparation within an ancilla budget: picks the suffix width n_b
/// (UCR prefix at eps/2 + select of controlled trees at eps/2; n_b = 0 and
/// n_b = n degenerate to the pure UCR / pure tree paths at full eps) whose
/// feasible circuit has the smallest cost-model depth, larger n_b on ties.
/// Throws InfeasibleError when n_anc < n; the result's ancilla peak never
/// exceeds n_anc.
Circuit synth_state_tradeoff(const AmplitudeVector& a, double eps,
                             uint32_t n_anc);

/// Sparse preparation (requires the sparse form; duplicate indices are
/// rejected by validation).
Circuit synth_sparse_state(const AmplitudeVector& a, double eps,
                           uint32_t n_anc);

}  // namespace qamc
