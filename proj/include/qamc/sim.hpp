// SPDX-License-Identifier: MIT
//
// Verification back-end: a dense statevector engine for small circuits and a
// sparse map-based engine (256-wire basis keys) for the wide, shallowly
// entangled circuits the synthesis routines produce.  Consecutive
// single-qubit gates are folded into one 2x2 apply, so expanded rotation
// sequences cost one matrix application each.
//
// A circuit is simulated as  global_phase * (product of its gates);  the
// scalar is folded into the returned amplitudes.

#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qamc/circuit.hpp"

namespace qamc {

constexpr uint32_t kMaxSparseWires = 256;

struct BasisKey {
  std::array<uint64_t, 4> w{};

  bool operator==(const BasisKey&) const = default;
  bool bit(uint32_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set_bit(uint32_t i, bool v) {
    const uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      w[i >> 6] |= m;
    else
      w[i >> 6] &= ~m;
  }
  void flip_bit(uint32_t i) { w[i >> 6] ^= uint64_t{1} << (i & 63); }
};

struct BasisKeyHash {
  size_t operator()(const BasisKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t x : k.w) {
      h ^= x;
      h *= 1099511628211ull;
      h ^= x >> 32;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

using SparseAmps = std::unordered_map<BasisKey, cplx, BasisKeyHash>;

struct SparseState {
  uint32_t n_wires = 0;
  SparseAmps amps;
};

struct RunCaps {
  size_t branch_cap = size_t{1} << 21;  // max simultaneous basis branches
  double drop_tol = 1e-15;              // amplitudes below this are dropped
};

/// Basis state with index bits x on wires [0, n_index) (wire 0 = MSB of x)
/// and zeros elsewhere.
SparseState basis_state(uint32_t n_wires, uint64_t x, uint32_t n_index);

/// Runs the circuit on the sparse engine.  Throws CapError when the branch
/// count exceeds caps.branch_cap or the circuit is wider than 256 wires.
SparseState run_sparse(const Circuit& c, SparseState init,
                       const RunCaps& caps = {});

/// Dense statevector run; requires n_total <= 20 and |init| = 2^n_total.
std::vector<cplx> run_dense(const Circuit& c, std::vector<cplx> init);

/// Full unitary by columns; requires n_total <= 12.  Row-major, dimension
/// 2^n_total, basis index per the wire-0-is-MSB convention.
std::vector<cplx> unitary_of(const Circuit& c);

/// Probes the data block (<0_anc| (x) I) U (|0_anc> (x) I) over the first
/// n_block wires by running one basis column per block index.  `leakage` is
/// the largest per-column L2 mass found outside the ancilla-zero subspace
/// (exactly 0 for circuits that restore their ancillas).
struct BlockProbe {
  size_t dim = 0;
  std::vector<cplx> block;  // row-major dim x dim
  double leakage = 0.0;
};
BlockProbe probe_block(const Circuit& c, uint32_t n_block,
                       const RunCaps& caps = {});

/// Runs |0...0> through the circuit and reads the state off the data wires;
/// `leakage` is the L2 mass on branches with a nonzero ancilla bit.
struct StateProbe {
  std::vector<cplx> state;  // 2^n_data amplitudes
  double leakage = 0.0;
};
StateProbe probe_state(const Circuit& c, const RunCaps& caps = {});

/// || a - b ||_2.
double state_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);
/// min_phi || a - e^{i phi} b ||_2.
double state_distance_up_to_phase(const std::vector<cplx>& a,
                                  const std::vector<cplx>& b);

/// Largest singular value of A - B (row-major square matrices), by seeded
/// power iteration; intended for small verification matrices (dim <= 512).
double spectral_distance(const std::vector<cplx>& a,
                         const std::vector<cplx>& b, size_t dim);

/// max_ij |A_ij - B_ij|.
double entrywise_distance(const std::vector<cplx>& a,
                          const std::vector<cplx>& b);

}  // namespace qamc
