// SPDX-License-Identifier: MIT

#include "qamc/state_prep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "qamc/boolean_memory.hpp"
#include "qamc/gadgets.hpp"
#include "qamc/pauli.hpp"
#include "qamc/select.hpp"

namespace qamc {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || eps >= 1.0)
    throw SchemaError("accuracy must lie in (0, 1)");
}

void require_dense(const AmplitudeVector& a) {
  if (a.sparse_form)
    throw SchemaError("this preparation needs a dense amplitude vector");
}

// Magnitude/phase pyramid over the subtree amplitudes: level n holds the
// target moduli and arguments, level L pairs children by hypotenuse and
// phase mean.  Phases of zero-modulus amplitudes are pinned to 0.
struct Pyramid {
  std::vector<std::vector<double>> mag, psi;
};

Pyramid build_pyramid(uint32_t n, const std::vector<cplx>& amps) {
  Pyramid p;
  p.mag.resize(n + 1);
  p.psi.resize(n + 1);
  p.mag[n].resize(amps.size());
  p.psi[n].resize(amps.size());
  for (size_t i = 0; i < amps.size(); ++i) {
    p.mag[n][i] = std::abs(amps[i]);
    p.psi[n][i] = p.mag[n][i] == 0.0 ? 0.0 : std::arg(amps[i]);
  }
  for (uint32_t L = n; L-- > 0;) {
    const size_t m = size_t{1} << L;
    p.mag[L].resize(m);
    p.psi[L].resize(m);
    for (size_t k = 0; k < m; ++k) {
      p.mag[L][k] = std::hypot(p.mag[L + 1][2 * k], p.mag[L + 1][2 * k + 1]);
      p.psi[L][k] = 0.5 * (p.psi[L + 1][2 * k] + p.psi[L + 1][2 * k + 1]);
    }
  }
  return p;
}

double state_deficit(uint32_t n, const std::vector<cplx>& amps) {
  return build_pyramid(n, amps).psi[0][0];
}

UcrAngleTable ucr_table(uint32_t n, const std::vector<cplx>& amps) {
  const Pyramid p = build_pyramid(n, amps);
  UcrAngleTable t;
  t.n = n;
  t.ay.resize(n);
  t.az.resize(n);
  for (uint32_t j = 1; j <= n; ++j) {
    const size_t m = size_t{1} << (j - 1);
    t.ay[j - 1].resize(m);
    t.az[j - 1].resize(m);
    for (size_t k = 0; k < m; ++k) {
      t.ay[j - 1][k] = 2.0 * std::atan2(p.mag[j][2 * k + 1], p.mag[j][2 * k]);
      t.az[j - 1][k] = p.psi[j][2 * k + 1] - p.psi[j][2 * k];
    }
  }
  t.psi00 = p.psi[0][0];
  return t;
}

// The w-gadget: with the parent `a` live it splits the branch onto the two
// child nodes, amplitude factor cos(theta) e^{i phi} on `left` and
// sin(theta) e^{-i phi} on `right` (the parent stays set); with the parent
// |0> every gate pair cancels structurally, so it is the exact identity
// even after rotation synthesis.
void emit_w(Circuit& c, double theta, double phi, double eps, uint32_t a,
            uint32_t right, uint32_t left) {
  const double e4 = eps / 4.0;
  c.cnot(a, right);
  c.ry(-theta, e4, right);
  c.cnot(a, right);
  c.ry(theta, e4, right);
  c.rz(-phi, e4, right);
  c.cnot(a, right);
  c.rz(phi, e4, right);
  c.cnot(a, right);
  c.x(right);
  emit_toffoli(c, a, right, left);
  c.x(right);
}

// Root specialization (parent identically |1>): the CNOTs collapse to X and
// the Toffoli to a CNOT; the adjacent X pair around it cancels.
void emit_w_root(Circuit& c, double theta, double phi, double eps,
                 uint32_t right, uint32_t left) {
  const double e4 = eps / 4.0;
  c.x(right);
  c.ry(-theta, e4, right);
  c.x(right);
  c.ry(theta, e4, right);
  c.rz(-phi, e4, right);
  c.x(right);
  c.rz(phi, e4, right);
  c.cnot(right, left);
  c.x(right);
}

// Number of extra direction-bit copies for a stage-3 layer: as many as the
// slack allows, capped at one per parent, then trimmed to the smallest count
// that still yields the same number of serial groups.
uint32_t stage3_width(size_t parents, uint64_t slack) {
  if (parents <= 1) return 0;
  const uint64_t cap = std::min<uint64_t>(parents - 1, slack);
  const uint64_t groups = (parents + cap) / (cap + 1);
  return static_cast<uint32_t>((parents + groups - 1) / groups - 1);
}

void note_ucr_budgets(Circuit& c, const UcrAngleTable& t, double eps) {
  for (uint32_t j = 1; j <= t.n; ++j) {
    bool active = false;
    for (size_t k = 0; k < t.ay[j - 1].size() && !active; ++k)
      active = t.ay[j - 1][k] != 0.0 || t.az[j - 1][k] != 0.0;
    if (!active) continue;
    char label[32];
    std::snprintf(label, sizeof label, "ucr layer %u", j);
    c.note_budget(label, ucr_layer_eps(eps, t.n, j));
  }
}

void note_tree_budgets(Circuit& c, uint32_t n, double eps) {
  for (uint32_t L = 1; L <= n; ++L) {
    char label[32];
    std::snprintf(label, sizeof label, "tree layer %u", L);
    c.note_budget(label, tree_layer_eps(eps, n, L));
  }
}

std::vector<uint32_t> iota_wires(uint32_t n, uint32_t first = 0) {
  std::vector<uint32_t> w(n);
  std::iota(w.begin(), w.end(), first);
  return w;
}

// Pure-tree circuit with a capped stage-3 buffer; synth_state_tree is the
// uncapped instance, and the tradeoff's n_b = n candidate the capped one.
Circuit tree_circuit(const AmplitudeVector& a, double eps,
                     uint64_t buffer_slack) {
  Circuit c(a.n);
  const auto wires = iota_wires(a.n);
  note_tree_budgets(c, a.n, eps);
  const double def =
      emit_state_tree(c, wires, a.dense, eps, {}, buffer_slack);
  c.scale_phase(std::polar(1.0, def));
  c.set_register("data", wires);
  c.check_balanced();
  return c;
}

// Hybrid candidate for 1 <= n_b < n: UCR on the n_a-wire prefix prepares the
// block weights (payload deficits folded into their phases), then a
// recursive select runs one controlled tree per block on the suffix.
Circuit mixed_circuit(const AmplitudeVector& a, double eps, uint32_t n_b,
                      uint64_t buffer_slack) {
  const uint32_t n = a.n, n_a = n - n_b;
  const size_t blocks = size_t{1} << n_a, bs = size_t{1} << n_b;
  std::vector<cplx> prefix(blocks);
  std::vector<std::vector<cplx>> sub(blocks);
  for (size_t kb = 0; kb < blocks; ++kb) {
    sub[kb].assign(a.dense.begin() + kb * bs, a.dense.begin() + (kb + 1) * bs);
    double norm2 = 0.0;
    for (const cplx& v : sub[kb]) norm2 += std::norm(v);
    const double beta = std::sqrt(norm2);
    if (beta == 0.0) {
      sub[kb].assign(bs, cplx{0.0, 0.0});
      sub[kb][0] = 1.0;
      prefix[kb] = 0.0;
      continue;
    }
    for (cplx& v : sub[kb]) v /= beta;
    prefix[kb] = std::polar(beta, state_deficit(n_b, sub[kb]));
  }
  Circuit c(n);
  const auto wires = iota_wires(n);
  const std::vector<uint32_t> aw(wires.begin(), wires.begin() + n_a);
  const std::vector<uint32_t> bw(wires.begin() + n_a, wires.end());
  c.note_budget("tradeoff prefix", eps / 2.0);
  c.note_budget("tradeoff payloads", eps / 2.0);
  const double def = emit_state_ucr(c, aw, prefix, eps / 2.0, {});
  emit_select_recursive(c, aw, 0, blocks,
                        [&](Circuit& cc, uint64_t x, uint32_t flag) {
                          emit_state_tree(cc, bw, sub[x], eps / 2.0, flag,
                                          buffer_slack);
                        });
  c.scale_phase(std::polar(1.0, def));
  c.set_register("data", wires);
  c.check_balanced();
  return c;
}

}  // namespace

AmplitudeVector AmplitudeVector::make_dense(uint32_t n,
                                            std::vector<cplx> amps) {
  AmplitudeVector a;
  a.n = n;
  a.sparse_form = false;
  a.dense = std::move(amps);
  a.validate();
  return a;
}

AmplitudeVector AmplitudeVector::make_sparse(
    uint32_t n, std::vector<SparseAmplitude> entries) {
  AmplitudeVector a;
  a.n = n;
  a.sparse_form = true;
  a.sparse = std::move(entries);
  a.validate();
  return a;
}

void AmplitudeVector::validate() const {
  double norm2 = 0.0;
  if (sparse_form) {
    if (n >= 64) throw SchemaError("sparse amplitude vectors support n <= 63");
    if (!dense.empty())
      throw SchemaError("amplitude vector cannot carry both forms");
    if (sparse.empty())
      throw SchemaError("sparse amplitude vector needs at least one entry");
    std::vector<uint64_t> idx;
    idx.reserve(sparse.size());
    for (const auto& e : sparse) {
      if (n < 64 && (e.index >> n) != 0)
        throw SchemaError("sparse amplitude index out of range");
      idx.push_back(e.index);
      norm2 += std::norm(e.amp);
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      throw SchemaError("sparse amplitude indices must be distinct");
  } else {
    if (n > 20) throw SchemaError("dense amplitude vectors support n <= 20");
    if (!sparse.empty())
      throw SchemaError("amplitude vector cannot carry both forms");
    if (dense.size() != (size_t{1} << n))
      throw SchemaError("dense amplitude vector needs exactly 2^n entries");
    for (const cplx& v : dense) norm2 += std::norm(v);
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
    throw SchemaError("amplitude vector is not normalized");
}

std::vector<cplx> AmplitudeVector::to_dense() const {
  if (!sparse_form) return dense;
  if (n > 20)
    throw SchemaError("sparse amplitude vector too wide to densify");
  std::vector<cplx> out(size_t{1} << n, cplx{0.0, 0.0});
  for (const auto& e : sparse) out[e.index] = e.amp;
  return out;
}

UcrAngleTable ucr_angles(const AmplitudeVector& a) {
  a.validate();
  require_dense(a);
  return ucr_table(a.n, a.dense);
}

TreeAmplitudeTable tree_amplitudes(const AmplitudeVector& a) {
  a.validate();
  require_dense(a);
  const Pyramid p = build_pyramid(a.n, a.dense);
  TreeAmplitudeTable t;
  t.n = a.n;
  t.alpha.resize(a.n + 1);
  for (uint32_t L = 0; L <= a.n; ++L) {
    t.alpha[L].resize(size_t{1} << L);
    for (size_t k = 0; k < t.alpha[L].size(); ++k)
      t.alpha[L][k] = std::polar(p.mag[L][k], p.psi[L][k]);
  }
  t.theta.resize(a.n);
  t.phi.resize(a.n);
  for (uint32_t L = 0; L < a.n; ++L) {
    t.theta[L].resize(size_t{1} << L);
    t.phi[L].resize(size_t{1} << L);
    for (size_t k = 0; k < t.theta[L].size(); ++k) {
      t.theta[L][k] =
          std::atan2(p.mag[L + 1][2 * k + 1], p.mag[L + 1][2 * k]);
      t.phi[L][k] = 0.5 * (p.psi[L + 1][2 * k] - p.psi[L + 1][2 * k + 1]);
    }
  }
  return t;
}

double ucr_layer_eps(double eps, uint32_t n, uint32_t j) {
  return std::ldexp(eps, -static_cast<int>(n - j + 2));
}

double tree_layer_eps(double eps, uint32_t n, uint32_t L) {
  const double d = static_cast<double>(n - L + 1);
  return (6.0 / (std::numbers::pi * std::numbers::pi)) * eps / (d * d);
}

namespace {

// One cascade layer of a uniformly controlled rotation, walked over its
// angle cells in Gray-code order with a lazily maintained AND ladder.
// `lits` holds the control wires: an optional always-|1> external control
// first, then the n_sel selector wires (most significant cell bit first).
// X conjugations and ladder toffolis are emitted only on the way to a
// nonzero rotation, so an all-zero layer emits nothing and the multi-control
// overhead per cell is amortized constant: the cell walk flips one selector
// per step, and the ladder consumes the most frequently flipped selector
// last, so most steps rebuild only the top ladder node.
void emit_ucr_layer(Circuit& c, GateKind axis, const std::vector<double>& ang,
                    double eps_layer, const std::vector<uint32_t>& lits,
                    uint32_t n_sel, uint32_t target) {
  bool any = false;
  for (double a : ang) any = any || a != 0.0;
  if (!any) return;
  const uint32_t nl = static_cast<uint32_t>(lits.size());
  if (nl == 0) {
    if (axis == GateKind::Ry)
      c.ry(ang[0], eps_layer, target);
    else
      c.rz(ang[0], eps_layer, target);
    return;
  }
  std::vector<uint32_t> scratch;
  if (nl >= 2) scratch = c.alloc_ancillas(nl - 1);
  std::vector<bool> x_on(nl, false);
  uint32_t built = 0;  // valid ladder nodes, bottom up
  const auto node = [&](uint32_t i) {
    emit_toffoli(c, i == 0 ? lits[0] : scratch[i - 1], lits[i + 1],
                 scratch[i]);
  };
  const auto unwind_to = [&](uint32_t floor_nodes) {
    while (built > floor_nodes) node(--built);
  };
  const uint32_t off = nl - n_sel;
  const uint64_t cells = uint64_t{1} << n_sel;
  for (uint64_t t = 0; t < cells; ++t) {
    const uint64_t k = t ^ (t >> 1);
    if (ang[k] == 0.0) continue;
    for (uint32_t s = 0; s < n_sel; ++s) {
      const uint32_t li = off + s;
      const bool need = ((k >> (n_sel - 1 - s)) & 1) == 0;
      if (x_on[li] == need) continue;
      unwind_to(li == 0 ? 0 : li - 1);
      c.x(lits[li]);
      x_on[li] = need;
    }
    while (built + 1 < nl) node(built++);
    emit_controlled_rotation(c, axis, ang[k], eps_layer,
                             nl == 1 ? lits[0] : scratch[nl - 2], target);
  }
  unwind_to(0);
  for (uint32_t li = 0; li < nl; ++li)
    if (x_on[li]) c.x(lits[li]);
  if (!scratch.empty()) c.free_ancillas(scratch);
}

}  // namespace

double emit_state_ucr(Circuit& c, const std::vector<uint32_t>& wires,
                      const std::vector<cplx>& amps, double eps,
                      std::optional<uint32_t> ctrl) {
  const uint32_t n = static_cast<uint32_t>(wires.size());
  if (amps.size() != (size_t{1} << n))
    throw std::logic_error("ucr amplitude count does not match wire count");
  const UcrAngleTable t = ucr_table(n, amps);
  for (GateKind axis : {GateKind::Ry, GateKind::Rz}) {
    for (uint32_t j = 1; j <= n; ++j) {
      const auto& ang = axis == GateKind::Ry ? t.ay[j - 1] : t.az[j - 1];
      const double ej = ucr_layer_eps(eps, n, j);
      std::vector<uint32_t> lits;
      if (ctrl) lits.push_back(*ctrl);
      lits.insert(lits.end(), wires.begin(), wires.begin() + (j - 1));
      emit_ucr_layer(c, axis, ang, ej, lits, j - 1, wires[j - 1]);
    }
  }
  return t.psi00;
}

double emit_state_tree(Circuit& c, const std::vector<uint32_t>& wires,
                       const std::vector<cplx>& amps, double eps,
                       std::optional<uint32_t> ctrl, uint64_t buffer_slack) {
  const uint32_t n = static_cast<uint32_t>(wires.size());
  if (amps.size() != (size_t{1} << n))
    throw std::logic_error("tree amplitude count does not match wire count");
  if (n == 0) return 0.0;
  const Pyramid p = build_pyramid(n, amps);
  std::vector<std::vector<uint32_t>> node(n + 1);
  for (uint32_t L = 1; L <= n; ++L)
    node[L] = c.alloc_ancillas(uint32_t{1} << L);

  // stage 1: one w-gadget per parent extends the path superposition a layer
  for (uint32_t L = 1; L <= n; ++L) {
    const double el = tree_layer_eps(eps, n, L);
    const size_t parents = size_t{1} << (L - 1);
    for (size_t k = 0; k < parents; ++k) {
      const double th = std::atan2(p.mag[L][2 * k + 1], p.mag[L][2 * k]);
      const double ph = 0.5 * (p.psi[L][2 * k] - p.psi[L][2 * k + 1]);
      const uint32_t left = node[L][2 * k], right = node[L][2 * k + 1];
      if (L == 1 && !ctrl)
        emit_w_root(c, th, ph, el, right, left);
      else
        emit_w(c, th, ph, el, L == 1 ? *ctrl : node[L - 1][k], right, left);
    }
  }
  // stage 2: data bit j-1 = parity of layer j's odd (right-turn) nodes
  for (uint32_t j = 1; j <= n; ++j) {
    std::vector<uint32_t> odd;
    odd.reserve(size_t{1} << (j - 1));
    for (size_t k = 1; k < (size_t{1} << j); k += 2) odd.push_back(node[j][k]);
    with_xor_fold(c, odd, [&](uint32_t root) { c.cnot(root, wires[j - 1]); });
  }
  // stage 3: uncompute leaves first; each layer's parents share fanned-out
  // copies of the direction bit, one Toffoli pair per parent
  for (uint32_t L = n; L >= 1; --L) {
    const size_t parents = size_t{1} << (L - 1);
    const uint32_t w = stage3_width(parents, buffer_slack);
    const std::vector<uint32_t> copies = c.alloc_ancillas(w);
    emit_fanout(c, wires[L - 1], copies);
    std::vector<uint32_t> src{wires[L - 1]};
    src.insert(src.end(), copies.begin(), copies.end());
    for (size_t k = 0; k < parents; ++k) {
      const uint32_t d = src[k % src.size()];
      const uint32_t left = node[L][2 * k], right = node[L][2 * k + 1];
      if (L == 1 && !ctrl) {
        c.cnot(d, right);
        c.x(d);
        c.cnot(d, left);
        c.x(d);
      } else {
        const uint32_t parent = L == 1 ? *ctrl : node[L - 1][k];
        emit_toffoli(c, parent, d, right);
        emit_toffoli_pol(c, parent, true, d, false, left);
      }
    }
    emit_fanout_inverse(c, wires[L - 1], copies);
    c.free_ancillas(copies);
  }
  for (uint32_t L = 1; L <= n; ++L) c.free_ancillas(node[L]);
  return p.psi[0][0];
}

double emit_state_sparse(Circuit& c, const std::vector<uint32_t>& wires,
                         const std::vector<SparseAmplitude>& entries,
                         double eps, uint32_t n_anc,
                         std::optional<uint32_t> ctrl) {
  const uint32_t n = static_cast<uint32_t>(wires.size());
  const size_t s = entries.size();
  if (s == 0) throw std::logic_error("sparse preparation needs entries");
  if (s == 1) {
    const uint64_t q = entries[0].index;
    for (uint32_t i = 0; i < n; ++i)
      if ((q >> (n - 1 - i)) & 1) {
        if (ctrl)
          c.cnot(*ctrl, wires[i]);
        else
          c.x(wires[i]);
      }
    return std::arg(entries[0].amp);
  }
  uint32_t m_idx = 0;
  while ((size_t{1} << m_idx) < s) ++m_idx;
  std::vector<cplx> coeff(size_t{1} << m_idx, cplx{0.0, 0.0});
  for (size_t k = 0; k < s; ++k) coeff[k] = entries[k].amp;
  const std::vector<uint32_t> areg = c.alloc_ancillas(m_idx);
  const double def = emit_state_ucr(c, areg, coeff, eps / 2.0, ctrl);

  std::vector<PauliString> strs(s);
  for (size_t k = 0; k < s; ++k) {
    strs[k].n = n;
    strs[k].letter.assign(n, 0);
    for (uint32_t i = 0; i < n; ++i)
      if ((entries[k].index >> (n - 1 - i)) & 1) strs[k].letter[i] = 1;
  }
  const uint32_t sub_anc = n_anc > m_idx ? n_anc - m_idx : 0;
  emit_select_pauli(c, areg, wires, strs, sub_anc, ctrl);

  std::vector<SbmEntry> ent;
  ent.reserve(s - 1);
  for (size_t k = 1; k < s; ++k)
    ent.push_back({entries[k].index, static_cast<uint64_t>(k)});
  const std::vector<uint32_t> word(areg.rbegin(), areg.rend());
  emit_sbm(c, wires, word, ent, sub_anc, ctrl);
  c.free_ancillas(areg);
  return def;
}

Circuit synth_state_ucr(const AmplitudeVector& a, double eps) {
  check_eps(eps);
  a.validate();
  require_dense(a);
  Circuit c(a.n);
  const auto wires = iota_wires(a.n);
  note_ucr_budgets(c, ucr_table(a.n, a.dense), eps);
  const double def = emit_state_ucr(c, wires, a.dense, eps, {});
  c.scale_phase(std::polar(1.0, def));
  c.set_register("data", wires);
  c.check_balanced();
  return c;
}

Circuit synth_state_tree(const AmplitudeVector& a, double eps,
                         bool controlled) {
  check_eps(eps);
  a.validate();
  require_dense(a);
  if (!controlled) return tree_circuit(a, eps, UINT64_MAX);
  Circuit c(a.n + 1);
  const auto wires = iota_wires(a.n, 1);
  note_tree_budgets(c, a.n, eps);
  const double def = emit_state_tree(c, wires, a.dense, eps, 0u, UINT64_MAX);
  c.scale_phase(std::polar(1.0, def));
  c.set_register("ctrl", {0u});
  c.set_register("data", wires);
  c.check_balanced();
  return c;
}

Circuit synth_state_tradeoff(const AmplitudeVector& a, double eps,
                             uint32_t n_anc) {
  check_eps(eps);
  a.validate();
  require_dense(a);
  if (n_anc < a.n)
    throw InfeasibleError(
        "state tradeoff needs an ancilla budget of at least n");
  const uint32_t n = a.n;
  std::optional<Circuit> best;
  uint64_t best_depth = 0;
  int best_nb = -1;
  for (uint32_t n_b = 0; n_b <= n; ++n_b) {
    Circuit cand;
    if (n_b == 0) {
      cand = synth_state_ucr(a, eps);
    } else {
      const uint64_t fixed = (n - n_b) + ((uint64_t{2} << n_b) - 2);
      if (fixed > n_anc) continue;
      const uint64_t slack = n_anc - fixed;
      cand = n_b == n ? tree_circuit(a, eps, slack)
                      : mixed_circuit(a, eps, n_b, slack);
    }
    if (cand.ancilla_peak() > n_anc) continue;
    const uint64_t d = cand.metrics({}).depth;
    if (!best || d < best_depth ||
        (d == best_depth && static_cast<int>(n_b) > best_nb)) {
      best = std::move(cand);
      best_depth = d;
      best_nb = static_cast<int>(n_b);
    }
  }
  return std::move(*best);
}

Circuit synth_sparse_state(const AmplitudeVector& a, double eps,
                           uint32_t n_anc) {
  check_eps(eps);
  a.validate();
  if (!a.sparse_form)
    throw SchemaError("sparse preparation needs a sparse amplitude vector");
  Circuit c(a.n);
  const auto wires = iota_wires(a.n);
  if (a.sparse.size() >= 2) c.note_budget("sparse coefficients", eps / 2.0);
  const double def = emit_state_sparse(c, wires, a.sparse, eps, n_anc, {});
  c.scale_phase(std::polar(1.0, def));
  c.set_register("data", wires);
  c.check_balanced();
  return c;
}

}  // namespace qamc
