// SPDX-License-Identifier: MIT
//
// Block-encodings: embeddings of a (sub)normalized matrix H/alpha as the
// top-left block of a larger unitary, with every non-block wire postselected
// on |0>.  Two assemblies are provided:
//
//  - LCU: U = prep^dagger . Select(u_p) . prep, where prep loads the
//    coefficient state sum_p sqrt(a_p/alpha)|p> on an index register and the
//    select applies term p on the index-p branch.  Payloads are Pauli
//    strings (built-in) or caller-supplied controlled emitters.
//  - Sparse matrix: U = U_R^dagger . SWAP . U_L with alpha = ||A||_F, where
//    U_L loads the row-norm state on the second register and U_R select-
//    prepares the conjugated, normalized rows.
//
// The encoded block always lives on the FIRST n wires of the returned
// circuit (probe_block(c, n) reads it off); the report's n_anc counts every
// other wire.  Synthesis never simulates: eps_measured starts NaN and is
// filled by measure_block.
//
// Wrappers record the error-budget split in the circuit ledger ("lcu prep" +
// "lcu unprep" at eps/3 each, plus "lcu phases" when coefficient phases are
// not quarter-turns; "sparse-be left/right factor" at eps/2 each).

#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "qamc/circuit.hpp"
#include "qamc/pauli.hpp"
#include "qamc/select.hpp"
#include "qamc/sim.hpp"

namespace qamc {

/// One LCU term: H = sum_p coeff_p * pauli_p.
struct LcuTerm {
  cplx coeff{0.0, 0.0};
  PauliString pauli;
};

/// Pauli linear combination over n qubits.  Coefficient phases are folded
/// into the string prefactor (quarter-turns) or realized as an index-branch
/// phase rotation (anything else), keeping the loaded amplitudes real
/// nonnegative.
struct LcuSpec {
  uint32_t n = 0;
  std::vector<LcuTerm> terms;

  void validate() const;
  double alpha() const;                // sum_p |coeff_p|
  std::vector<cplx> matrix() const;    // dense sum, desk sizes (n <= 10)
};

/// LCU over caller-supplied controlled payloads; coefficients must be real
/// nonnegative (fold any phase into your payload).
struct GeneralLcuSpec {
  uint32_t n = 0;
  std::vector<double> coeffs;
  std::vector<ControlledImpl> payloads;

  void validate() const;
  double alpha() const;
};

struct BlockEncodingReport {
  double alpha = 0.0;
  uint32_t n_anc = 0;  // wires postselected around the block
  double eps_requested = 0.0;
  double eps_measured = std::numeric_limits<double>::quiet_NaN();
  ResourceReport resource;
};

/// LCU block-encoding with generic payloads.  Requires n_anc >= max(m, 1)
/// where m = ceil(log2 P) (the index walk needs one flag cell per level, and
/// one even for a single payload).
std::pair<Circuit, BlockEncodingReport> synth_lcu_be(const GeneralLcuSpec& spec,
                                                     double eps,
                                                     uint32_t n_anc);

/// LCU block-encoding with Pauli payloads, select sized to the ancilla
/// budget.  Requires n_anc >= m = ceil(log2 P).
std::pair<Circuit, BlockEncodingReport> synth_pauli_lcu_be(const LcuSpec& spec,
                                                           double eps,
                                                           uint32_t n_anc);

/// Complex sparse matrix in coordinate form, dimension 2^n per side.
struct ComplexMatrixEntry {
  uint64_t row = 0;
  uint64_t col = 0;
  cplx value{0.0, 0.0};
};

struct SparseMatrixCOO {
  uint32_t n = 0;
  std::vector<ComplexMatrixEntry> entries;

  void validate() const;  // coordinates in range and distinct; norm > 0
  double frobenius() const;
  std::vector<cplx> matrix() const;  // dense, desk sizes (n <= 10)
};

/// Frobenius block-encoding of a sparse matrix (alpha = ||A||_F).  Requires
/// n_anc >= n for the row-select walk; the remainder feeds the per-row
/// sparse preparations.
std::pair<Circuit, BlockEncodingReport> synth_sparse_be(const SparseMatrixCOO& a,
                                                        double eps,
                                                        uint32_t n_anc);

/// Probes the first-n_block-wire block of `c`, fills report.eps_measured
/// with spectral_distance(alpha * block, target), and returns it.  `target`
/// is the row-major dense matrix the encoding promises (dimension
/// 2^n_block).
double measure_block(const Circuit& c, uint32_t n_block,
                     const std::vector<cplx>& target,
                     BlockEncodingReport& report, const RunCaps& caps = {});

}  // namespace qamc
