// SPDX-License-Identifier: MIT
//
// Counting-argument capacity formulas and the certified lower bounds they
// imply for index-access circuits, sparse block-encodings, and state
// preparation.  A circuit family with gate budget C (or space-time budget
// (n + n_anc)·D) can realize only finitely many distinct unitaries; a task
// whose instance count exceeds that capacity forces the budget up.  All
// arithmetic stays in the log domain, and the certified minima are the exact
// thresholds of the enumeration, with no hidden constants.

#pragma once

#include <cstdint>
#include <optional>

#include "qamc/circuit.hpp"

namespace qamc {

// budget query: exactly one of {c} or {n_anc, d} must be supplied
struct CapacityQuery {
  uint32_t n = 0;        // data qubits
  uint32_t g = 1;        // elementary gate-set size
  std::optional<uint64_t> c;      // gate-count budget
  std::optional<uint32_t> n_anc;  // ancilla budget
  std::optional<uint64_t> d;      // depth budget
  void validate() const;
};

struct DepthCapacity {
  double bits = 0.0;
  bool padded = false;  // n + n_anc was odd and padded up by one
};

// log2 of the number of circuits with at most q.c gates: gate j touches a
// live set of at most n + 2(j-1) wires, each gate picking an ordered wire
// pair, a single wire, or one of two ancilla-introduction moves, times one
// of g gate labels.
double capacity_log_gates(const CapacityQuery& q);

// log2 of the number of circuits of depth q.d on n + n_anc wires:
// (n+n_anc)^{2D} pairings times g^{(n+n_anc)·D/2} labels.
DepthCapacity capacity_log_depth(const CapacityQuery& q);

// exact log2(N!) by summation
double log2_factorial(uint64_t n);

struct LowerBound {
  double target_bits = 0.0;   // information the task class must encode
  uint64_t min_count = 0;     // smallest C with gate capacity >= target
  uint64_t min_space_time = 0;  // smallest (n+n_anc)·D with depth capacity >= target
};

// permutation access on N = 2^n indices: target log2(N!)
LowerBound saim_lower_bound(uint32_t n, uint32_t g);

// diagonal sign matrices: target N = 2^n bits
LowerBound sparse_be_lower_bound(uint32_t n, uint32_t g);

// eps-separated amplitude grid: target 2^{n+1}·log2(1/eps) bits
LowerBound stateprep_lower_bound(uint32_t n, double eps, uint32_t g);

}  // namespace qamc
