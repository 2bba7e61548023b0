// SPDX-License-Identifier: MIT
//
// Single-qubit Rz/Ry synthesis over {H, S, S+, T, T+, X, Z}.
//
// Pipeline per request, in order:
//   1. database lookup — normal-form words ([T?](HT|SHT)* times one of the
//      24 projective Cliffords) enumerated to a T-count cap give the exact
//      minimum-T sequence when one lies within eps (ties broken by the
//      deterministic enumeration order);
//   2. meet-in-the-middle — best product A*B over a low-T subset A and a
//      grid-indexed nearest neighbour B;
//   3. commutator refinement — balanced-group-commutator levels on top of
//      the stage-2 result, with the measured error checked after each level.
//
// Distances are projective (global phase ignored): realized as the chordal
// distance between canonical-sign unit quaternions, which equals
// 2*|sin(delta/4)| for unitaries differing by a rotation of angle delta.
// The phase-exact variant uses the database only, with the exact operator
// distance and (HS)^3 = e^{i pi/4} I phase trimming; requests it cannot
// honour raise CapError naming the achievable accuracy.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qamc/circuit.hpp"

namespace qamc {

struct RotationResult {
  std::vector<GateKind> gates;  // circuit order, all on one wire
  double achieved = 0.0;        // measured distance to the request
  uint64_t t_count = 0;
};

class RotationSynthesizer {
 public:
  struct Options {
    int db_t_cap = 12;      // normal-form enumeration cap
    int mitm_t_cap = 6;     // T-count cap of the meet-in-the-middle subset
    int sk_max_level = 5;   // commutator refinement cap
    double grid_h = 0.05;   // quaternion grid cell size
  };

  RotationSynthesizer() : RotationSynthesizer(Options{}) {}
  explicit RotationSynthesizer(Options opt);
  ~RotationSynthesizer();
  RotationSynthesizer(const RotationSynthesizer&) = delete;
  RotationSynthesizer& operator=(const RotationSynthesizer&) = delete;

  /// Projective synthesis of Rz(angle) / Ry(angle) to within eps.
  /// synth_*(-angle) is gate-for-gate the inverse of synth_*(angle).
  const RotationResult& synth_rz(double angle, double eps);
  const RotationResult& synth_ry(double angle, double eps);

  /// Synthesis of Rz(angle) with the exact (phase-sensitive) metric;
  /// database-backed only.  Throws CapError when unreachable.
  RotationResult synth_rz_phase_exact(double angle, double eps);

  /// Optional binary persistence of the enumerated database.
  void save_database(const std::string& path) const;
  bool load_database(const std::string& path);

  size_t database_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Replaces every abstract rotation with a synthesized sequence on the same
/// wire.  Each replacement multiplies the circuit's global-phase scalar by
/// the correction that aligns the sequence with the ideal phased rotation,
/// so block and state checks remain phase-faithful.  Opposite-angle requests
/// expand to exactly inverse sequences (conjugation pairs cancel
/// structurally).
Circuit expand_rotations(const Circuit& in, RotationSynthesizer& synth);

}  // namespace qamc
