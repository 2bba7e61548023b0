// SPDX-License-Identifier: MIT

#include "qamc/select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qamc/gadgets.hpp"

namespace qamc {

namespace {

// Depth-first walk of the index tree.  cells[d] flags "the first d+1 index
// bits match this branch"; the depth-0 parent flag is the constant |1> and
// its transitions degenerate to (X-conjugated) CNOTs.
void walk(Circuit& c, const std::vector<uint32_t>& index,
          const std::vector<uint32_t>& cells, uint32_t depth,
          uint64_t node_base, uint64_t lo, uint64_t hi,
          const LeafEmitter& leaf) {
  const uint32_t m = static_cast<uint32_t>(index.size());
  if (depth == m) {
    leaf(c, node_base, cells[m - 1]);
    return;
  }
  const uint64_t half = 1ull << (m - depth - 1);
  auto down_left = [&] {
    if (depth == 0) {
      c.x(cells[0]);
      c.cnot(index[0], cells[0]);
    } else {
      emit_toffoli_pol(c, index[depth], false, cells[depth - 1], true,
                       cells[depth]);
    }
  };
  auto down_right = [&] {
    if (depth == 0)
      c.cnot(index[0], cells[0]);
    else
      emit_toffoli(c, index[depth], cells[depth - 1], cells[depth]);
  };
  if (node_base < hi && node_base + half > lo) {
    down_left();
    walk(c, index, cells, depth + 1, node_base, lo, hi, leaf);
    down_left();
  }
  if (node_base + half < hi && node_base + 2 * half > lo) {
    down_right();
    walk(c, index, cells, depth + 1, node_base + half, lo, hi, leaf);
    down_right();
  }
}

// One-hot flag tree over `index` covering leaves [0, count), optionally
// controlled.  Leaves are contiguous from 0, so the active prefix of level j
// holds act(j) = min(2^j, ceil(count / 2^(m-j))) nodes and a parent's left
// child is always active.  Gates emitted here are recorded on `undo` (each
// recorded step is its own inverse); ancillas are appended to `anc` in
// allocation order.  Returns the leaf flag wires.
std::vector<uint32_t> build_flag_tree(
    Circuit& c, const std::vector<uint32_t>& index, uint64_t count,
    std::optional<uint32_t> ctrl, std::vector<std::function<void()>>& undo,
    std::vector<uint32_t>& anc) {
  const uint32_t m = static_cast<uint32_t>(index.size());
  auto act = [&](uint32_t j) -> uint64_t {
    const uint64_t cap = 1ull << j;
    const uint64_t span = 1ull << (m - j);
    return std::min(cap, (count + span - 1) / span);
  };

  std::vector<uint32_t> level;  // flags of the current level
  {
    const uint64_t a1 = act(1);
    auto f = c.alloc_ancillas(static_cast<uint32_t>(a1));
    anc.insert(anc.end(), f.begin(), f.end());
    const uint32_t y = index[0];
    if (ctrl) {
      if (a1 == 2) {
        emit_toffoli(c, *ctrl, y, f[1]);
        undo.push_back([&c, ctrl, y, w = f[1]] { emit_toffoli(c, *ctrl, y, w); });
        c.cnot(*ctrl, f[0]);
        undo.push_back([&c, ctrl, w = f[0]] { c.cnot(*ctrl, w); });
        c.cnot(f[1], f[0]);
        undo.push_back([&c, a = f[1], b = f[0]] { c.cnot(a, b); });
      } else {
        emit_toffoli_pol(c, *ctrl, true, y, false, f[0]);
        undo.push_back(
            [&c, ctrl, y, w = f[0]] { emit_toffoli_pol(c, *ctrl, true, y, false, w); });
      }
    } else {
      if (a1 == 2) {
        c.cnot(y, f[1]);
        undo.push_back([&c, y, w = f[1]] { c.cnot(y, w); });
      }
      c.x(f[0]);
      c.cnot(y, f[0]);
      undo.push_back([&c, y, w = f[0]] {
        c.cnot(y, w);
        c.x(w);
      });
    }
    level = std::move(f);
  }

  for (uint32_t j = 1; j < m; ++j) {
    const uint64_t nP = act(j);
    const uint64_t nC = act(j + 1);
    const uint32_t y = index[j];
    // Every active parent controls on its own copy of y.
    std::vector<uint32_t> sources{y};
    if (nP >= 2) {
      auto copies = c.alloc_ancillas(static_cast<uint32_t>(nP - 1));
      anc.insert(anc.end(), copies.begin(), copies.end());
      emit_fanout(c, y, copies);
      undo.push_back([&c, y, copies] { emit_fanout_inverse(c, y, copies); });
      sources.insert(sources.end(), copies.begin(), copies.end());
    }
    auto next = c.alloc_ancillas(static_cast<uint32_t>(nC));
    anc.insert(anc.end(), next.begin(), next.end());
    for (uint64_t p = 0; p < nP; ++p) {
      const uint32_t fp = level[p];
      const uint32_t src = sources[p];
      const uint64_t c0 = 2 * p, c1 = 2 * p + 1;
      if (c1 < nC) {
        emit_toffoli(c, fp, src, next[c1]);
        undo.push_back([&c, fp, src, w = next[c1]] { emit_toffoli(c, fp, src, w); });
        c.cnot(fp, next[c0]);
        undo.push_back([&c, fp, w = next[c0]] { c.cnot(fp, w); });
        c.cnot(next[c1], next[c0]);
        undo.push_back([&c, a = next[c1], b = next[c0]] { c.cnot(a, b); });
      } else {
        emit_toffoli_pol(c, fp, true, src, false, next[c0]);
        undo.push_back([&c, fp, src, w = next[c0]] {
          emit_toffoli_pol(c, fp, true, src, false, w);
        });
      }
    }
    level = std::move(next);
  }
  return level;
}

void unwind(std::vector<std::function<void()>>& undo) {
  for (auto it = undo.rbegin(); it != undo.rend(); ++it) (*it)();
  undo.clear();
}

uint32_t split_m_a(uint32_t m, uint32_t l, uint32_t n_anc) {
  const double r = (static_cast<double>(n_anc) + 1.0) / (4.0 + static_cast<double>(l));
  if (r <= 1.0) return 0;
  const double lg = std::ceil(std::log2(r));
  if (lg >= static_cast<double>(m)) return m;
  return static_cast<uint32_t>(lg);
}

void validate_strings(uint32_t m, uint32_t l,
                      const std::vector<PauliString>& strings) {
  if (strings.empty()) throw SchemaError("select: empty string list");
  if (m < 64 && strings.size() > (1ull << m))
    throw SchemaError("select: more strings than index values");
  for (const auto& p : strings)
    if (p.n != l) throw SchemaError("select: string length mismatch");
}

}  // namespace

void emit_select_recursive(Circuit& c, const std::vector<uint32_t>& index,
                           uint64_t lo, uint64_t hi, const LeafEmitter& leaf) {
  if (lo >= hi) return;
  const uint32_t m = static_cast<uint32_t>(index.size());
  if (m == 0) {
    const uint32_t cell = c.alloc_ancilla();
    c.x(cell);
    leaf(c, 0, cell);
    c.x(cell);
    c.free_ancilla(cell);
    return;
  }
  auto cells = c.alloc_ancillas(m);
  walk(c, index, cells, 0, 0, lo, std::min(hi, uint64_t{1} << m), leaf);
  c.free_ancillas(cells);
}

void emit_select_pauli_router(Circuit& c, const std::vector<uint32_t>& index,
                              const std::vector<uint32_t>& data,
                              const std::vector<PauliString>& strings,
                              uint64_t base, uint64_t stride,
                              std::optional<uint32_t> ctrl) {
  const uint32_t m = static_cast<uint32_t>(index.size());
  const uint64_t S = strings.size();
  if (base >= S || stride == 0) return;
  uint64_t count = (S - base + stride - 1) / stride;
  if (m < 64) count = std::min(count, uint64_t{1} << m);

  if (m == 0) {
    if (ctrl)
      emit_controlled_pauli(c, strings[base], *ctrl, data);
    else
      emit_pauli(c, strings[base], data);
    return;
  }

  std::vector<std::function<void()>> undo;
  std::vector<uint32_t> anc;
  const auto flags = build_flag_tree(c, index, count, ctrl, undo, anc);

  // Phase payloads: S^kappa on the one-hot leaf flag realizes i^kappa.
  std::vector<uint64_t> xm(count), zm(count);
  for (uint64_t i = 0; i < count; ++i) {
    uint8_t kappa = 0;
    strings[base + i * stride].symplectic(xm[i], zm[i], kappa);
    switch (kappa % 4) {
      case 1: c.s(flags[i]); break;
      case 2: c.z(flags[i]); break;
      case 3: c.sdg(flags[i]); break;
      default: break;
    }
  }

  // Grid cells: one flag copy per (leaf, touched wire) pair; the flag itself
  // serves as the copy for the first touched wire.
  const uint32_t L = static_cast<uint32_t>(data.size());
  std::vector<std::vector<uint32_t>> xcol(L), zcol(L);
  for (uint64_t i = 0; i < count; ++i) {
    std::vector<uint32_t> touched;
    for (uint32_t l = 0; l < L; ++l)
      if (((xm[i] | zm[i]) >> l) & 1) touched.push_back(l);
    if (touched.empty()) continue;
    std::vector<uint32_t> cells{flags[i]};
    if (touched.size() >= 2) {
      auto copies = c.alloc_ancillas(static_cast<uint32_t>(touched.size() - 1));
      anc.insert(anc.end(), copies.begin(), copies.end());
      emit_fanout(c, flags[i], copies);
      undo.push_back([&c, f = flags[i], copies] { emit_fanout_inverse(c, f, copies); });
      cells.insert(cells.end(), copies.begin(), copies.end());
    }
    for (size_t t = 0; t < touched.size(); ++t) {
      const uint32_t l = touched[t];
      if ((zm[i] >> l) & 1) zcol[l].push_back(cells[t]);
      if ((xm[i] >> l) & 1) xcol[l].push_back(cells[t]);
    }
  }

  // Z columns first, then X columns, matching P = i^kappa X^a Z^b.
  for (uint32_t l = 0; l < L; ++l) {
    if (zcol[l].empty()) continue;
    c.h(data[l]);
    with_xor_fold(c, zcol[l], [&](uint32_t root) { c.cnot(root, data[l]); });
    c.h(data[l]);
  }
  for (uint32_t l = 0; l < L; ++l) {
    if (xcol[l].empty()) continue;
    with_xor_fold(c, xcol[l], [&](uint32_t root) { c.cnot(root, data[l]); });
  }

  unwind(undo);
  c.free_ancillas(anc);
}

void emit_select_pauli(Circuit& c, const std::vector<uint32_t>& index,
                       const std::vector<uint32_t>& data,
                       const std::vector<PauliString>& strings, uint32_t n_anc,
                       std::optional<uint32_t> ctrl) {
  const uint32_t m = static_cast<uint32_t>(index.size());
  const uint64_t S = strings.size();
  if (S == 0) return;

  if (m == 0) {
    if (ctrl)
      emit_controlled_pauli(c, strings[0], *ctrl, data);
    else
      emit_pauli(c, strings[0], data);
    return;
  }

  const uint32_t m_a = split_m_a(m, static_cast<uint32_t>(data.size()), n_anc);
  if (m_a == m) {
    emit_select_pauli_router(c, index, data, strings, 0, 1, ctrl);
    return;
  }

  const uint32_t m_b = m - m_a;
  const std::vector<uint32_t> high(index.begin(), index.begin() + m_a);
  const std::vector<uint32_t> low(index.begin() + m_a, index.end());
  const uint64_t stride = 1ull << m_b;
  const uint64_t n_leaves = std::min(stride, S);
  const LeafEmitter leaf = [&](Circuit& cc, uint64_t xb, uint32_t flag) {
    emit_select_pauli_router(cc, high, data, strings, xb, stride, flag);
  };
  if (ctrl) {
    std::vector<uint32_t> lowc{*ctrl};
    lowc.insert(lowc.end(), low.begin(), low.end());
    emit_select_recursive(c, lowc, stride, stride + n_leaves,
                          [&](Circuit& cc, uint64_t x, uint32_t flag) {
                            leaf(cc, x - stride, flag);
                          });
  } else {
    emit_select_recursive(c, low, 0, n_leaves, leaf);
  }
}

Circuit synth_select_recursive(const std::vector<ControlledImpl>& impls,
                               uint32_t m, uint32_t l) {
  if (m >= 32 || impls.size() != (1ull << m))
    throw SchemaError("select: implementation list must hold exactly 2^m entries");
  Circuit c(m + l);
  std::vector<uint32_t> index(m), data(l);
  for (uint32_t i = 0; i < m; ++i) index[i] = i;
  for (uint32_t i = 0; i < l; ++i) data[i] = m + i;
  c.set_register("index", index);
  c.set_register("data", data);
  emit_select_recursive(c, index, 0, 1ull << m,
                        [&](Circuit& cc, uint64_t x, uint32_t flag) {
                          impls[x].emit(cc, flag, data);
                        });
  c.check_balanced();
  return c;
}

Circuit synth_select_router(const std::vector<ControlledImpl>& impls,
                            uint32_t m, uint32_t l, uint32_t n_anc) {
  if (m >= 32 || impls.size() != (1ull << m))
    throw SchemaError("select: implementation list must hold exactly 2^m entries");
  const uint64_t M = 1ull << m;
  uint32_t r = 0;
  for (const auto& im : impls) r = std::max(r, im.n_anc);
  const uint64_t need = M * (4 + static_cast<uint64_t>(r)) - 1;
  if (n_anc < need) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "select router: budget %u below the required %llu ancillas",
                  n_anc, static_cast<unsigned long long>(need));
    throw InfeasibleError(buf);
  }
  Circuit c(m + l);
  std::vector<uint32_t> index(m), data(l);
  for (uint32_t i = 0; i < m; ++i) index[i] = i;
  for (uint32_t i = 0; i < l; ++i) data[i] = m + i;
  c.set_register("index", index);
  c.set_register("data", data);
  if (m == 0) {
    const uint32_t cell = c.alloc_ancilla();
    c.x(cell);
    impls[0].emit(c, cell, data);
    c.x(cell);
    c.free_ancilla(cell);
  } else {
    std::vector<std::function<void()>> undo;
    std::vector<uint32_t> anc;
    const auto flags = build_flag_tree(c, index, M, {}, undo, anc);
    for (uint64_t x = 0; x < M; ++x) impls[x].emit(c, flags[x], data);
    unwind(undo);
    c.free_ancillas(anc);
  }
  c.check_balanced();
  return c;
}

Circuit synth_select_pauli(uint32_t m, uint32_t l,
                           const std::vector<PauliString>& strings,
                           uint32_t n_anc) {
  validate_strings(m, l, strings);
  if (n_anc < m) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "select: budget %u below the %u flag cells of the recursive walk",
                  n_anc, m);
    throw InfeasibleError(buf);
  }
  Circuit c(m + l);
  std::vector<uint32_t> index(m), data(l);
  for (uint32_t i = 0; i < m; ++i) index[i] = i;
  for (uint32_t i = 0; i < l; ++i) data[i] = m + i;
  c.set_register("index", index);
  c.set_register("data", data);
  emit_select_pauli(c, index, data, strings, n_anc);
  c.check_balanced();
  return c;
}

}  // namespace qamc
