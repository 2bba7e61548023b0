// SPDX-License-Identifier: MIT
//
// Gate-level circuit representation over the gate set
// {H, S, S+, T, T+, X, Z, CNOT} plus abstract Rz/Ry rotation placeholders.
//
// Conventions used throughout the library:
//  - wire 0 is the most significant bit of a basis index
//    (basis index of a computational state = sum_i bit(wire i) * 2^(q-1-i));
//  - data wires occupy [0, n_data), ancilla wires are allocated above them;
//  - a circuit represents the unitary  global_phase * (product of its gates).

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qamc {

using cplx = std::complex<double>;

/// Input (JSON/flag) violated a schema or precondition.  CLI exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The requested ancilla budget cannot realize the construction.  Exit code 3.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A hard resource cap was exceeded (simulation size, synthesis depth, ...).
/// CLI exit code 4.
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GateKind : uint8_t {
  H,
  S,
  Sdg,
  T,
  Tdg,
  X,
  Z,
  Cnot,
  Rz,  // abstract z-rotation placeholder, carries (angle, eps)
  Ry,  // abstract y-rotation placeholder, carries (angle, eps)
};

inline bool is_rotation(GateKind k) {
  return k == GateKind::Rz || k == GateKind::Ry;
}

struct Gate {
  GateKind kind;
  uint32_t q0 = 0;     // target wire; control wire for CNOT
  uint32_t q1 = 0;     // CNOT target wire
  double angle = 0.0;  // rotations only
  double eps = 0.0;    // rotations only: the accuracy this placeholder owes

  bool operator==(const Gate&) const = default;
};

enum class CostModel { Abstract, Concrete };

struct CostConfig {
  CostModel model = CostModel::Abstract;
  double c_rot = 3.0;  // T-count multiplier for abstract rotations
};

/// One accuracy allocation handed to a sub-construction; the sum of all
/// entries never exceeds the accuracy promised by the emitting synthesis call.
struct BudgetEntry {
  std::string label;
  double eps = 0.0;
};

struct ResourceReport {
  uint64_t count = 0;      // weighted gate count
  uint64_t t_count = 0;    // T gates (abstract rotations weighted)
  uint64_t depth = 0;      // weighted ASAP depth
  uint64_t t_depth = 0;    // total length of the union of T-bearing intervals
  uint32_t ancilla_peak = 0;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(uint32_t n_data) : n_data_(n_data), n_total_(n_data) {}

  uint32_t n_data() const { return n_data_; }
  uint32_t n_total() const { return n_total_; }
  uint32_t ancilla_peak() const { return n_total_ - n_data_; }
  const std::vector<Gate>& gates() const { return gates_; }
  cplx global_phase() const { return phase_; }
  void scale_phase(cplx f) { phase_ *= f; }
  void set_phase(cplx f) { phase_ = f; }

  // -- gate emission -------------------------------------------------------
  void add(const Gate& g);
  void h(uint32_t q) { add({GateKind::H, q}); }
  void s(uint32_t q) { add({GateKind::S, q}); }
  void sdg(uint32_t q) { add({GateKind::Sdg, q}); }
  void t(uint32_t q) { add({GateKind::T, q}); }
  void tdg(uint32_t q) { add({GateKind::Tdg, q}); }
  void x(uint32_t q) { add({GateKind::X, q}); }
  void z(uint32_t q) { add({GateKind::Z, q}); }
  void cnot(uint32_t c, uint32_t t) { add({GateKind::Cnot, c, t}); }
  void rz(double angle, double eps, uint32_t q) {
    add({GateKind::Rz, q, 0, angle, eps});
  }
  void ry(double angle, double eps, uint32_t q) {
    add({GateKind::Ry, q, 0, angle, eps});
  }

  // -- ancilla pool ----------------------------------------------------------
  // Allocation reuses released wires (free list), so the number of wires ever
  // created equals the peak number simultaneously live.
  uint32_t alloc_ancilla();
  std::vector<uint32_t> alloc_ancillas(uint32_t k);
  void free_ancilla(uint32_t w);
  void free_ancillas(const std::vector<uint32_t>& ws);
  uint32_t live_ancillas() const { return live_anc_; }
  /// Checks the alloc/release ledger is balanced.  Every synthesis routine
  /// calls this before returning its circuit.
  void check_balanced() const;

  // -- named registers (metadata only) --------------------------------------
  void set_register(const std::string& name, std::vector<uint32_t> wires);
  const std::map<std::string, std::vector<uint32_t>>& registers() const {
    return registers_;
  }

  // -- accuracy ledger -------------------------------------------------------
  void note_budget(const std::string& label, double eps) {
    budget_.push_back({label, eps});
  }
  const std::vector<BudgetEntry>& budget() const { return budget_; }

  // -- whole-circuit operations ----------------------------------------------
  /// Reversed, gate-wise daggered circuit; global phase conjugated.
  Circuit inverse() const;
  /// this ∘ then: `then`'s gates run after ours.  Requires equal n_data and
  /// compatible register declarations; ancilla pools merge (peak = max).
  Circuit then(const Circuit& next) const;
  /// Appends another circuit's gates in place (inverted if requested),
  /// reusing its literal wire ids; both circuits must agree on n_data.
  void append(const Circuit& other, bool inverted = false);

  ResourceReport metrics(const CostConfig& cfg = {}) const;

  // -- text serialization ------------------------------------------------------
  void to_text(std::ostream& os) const;
  std::string to_text() const;
  static Circuit from_text(std::istream& is);
  static Circuit from_text(const std::string& s);

 private:
  uint32_t n_data_ = 0;
  uint32_t n_total_ = 0;
  uint32_t live_anc_ = 0;
  std::vector<Gate> gates_;
  std::vector<uint32_t> free_list_;
  std::map<std::string, std::vector<uint32_t>> registers_;
  std::vector<BudgetEntry> budget_;
  cplx phase_{1.0, 0.0};
};

/// T-weight of one abstract rotation under the cost model: the number of T
/// gates a synthesized replacement is modeled to contain.
uint64_t rotation_t_weight(double eps, double c_rot);

}  // namespace qamc
