// SPDX-License-Identifier: MIT
//
// n-letter Pauli strings with an i^kappa prefactor, plus their symplectic
// (X-mask, Z-mask) representation used by the routed select constructions.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qamc/circuit.hpp"

namespace qamc {

struct PauliString {
  uint32_t n = 0;
  std::vector<uint8_t> letter;  // 0=I 1=X 2=Y 3=Z, index 0 = leftmost letter
  uint8_t phase_quarter = 0;    // global factor i^phase_quarter

  /// Accepts e.g. "XZ", "+XIZ", "-YY", "iZ", "-iXX".
  static PauliString parse(const std::string& s);
  std::string str() const;

  bool is_identity_letterwise() const;

  /// Symplectic masks over the letters: bit l (letter index l) set in x_mask
  /// when letter l has an X component (X or Y), in z_mask when it has a Z
  /// component (Z or Y).  kappa absorbs one factor of i per Y so that
  /// P = i^kappa * prod_l X^{x_l} Z^{z_l} letterwise.
  void symplectic(uint64_t& x_mask, uint64_t& z_mask, uint8_t& kappa) const;

  /// Dense 2^n x 2^n matrix (row-major), letter 0 acting on the most
  /// significant bit.  Intended for oracle-side verification at desk sizes.
  std::vector<cplx> matrix() const;
};

}  // namespace qamc
