// SPDX-License-Identifier: MIT

#include "qamc/gadgets.hpp"

#include <cmath>

namespace qamc {

void emit_y(Circuit& c, uint32_t q) {
  c.sdg(q);
  c.x(q);
  c.s(q);
}

void emit_toffoli(Circuit& c, uint32_t a, uint32_t b, uint32_t t) {
  c.h(t);
  c.cnot(b, t);
  c.tdg(t);
  c.cnot(a, t);
  c.t(t);
  c.cnot(b, t);
  c.tdg(t);
  c.cnot(a, t);
  c.t(b);
  c.t(t);
  c.h(t);
  c.cnot(a, b);
  c.t(a);
  c.tdg(b);
  c.cnot(a, b);
}

void emit_toffoli_pol(Circuit& c, uint32_t a, bool pa, uint32_t b, bool pb,
                      uint32_t t) {
  if (!pa) c.x(a);
  if (!pb) c.x(b);
  emit_toffoli(c, a, b, t);
  if (!pb) c.x(b);
  if (!pa) c.x(a);
}

void emit_swap(Circuit& c, uint32_t a, uint32_t b) {
  c.cnot(a, b);
  c.cnot(b, a);
  c.cnot(a, b);
}

void emit_controlled_rotation(Circuit& c, GateKind axis, double angle,
                              double eps, uint32_t ctrl, uint32_t target) {
  if (!is_rotation(axis)) throw SchemaError("controlled rotation needs Rz/Ry");
  const double h = angle / 2.0, e = eps / 2.0;
  c.add({axis, target, 0, h, e});
  c.cnot(ctrl, target);
  c.add({axis, target, 0, -h, e});
  c.cnot(ctrl, target);
}

void emit_multiplexed_rotation(Circuit& c, GateKind axis, double angle,
                               double eps,
                               const std::vector<uint32_t>& controls,
                               uint64_t pattern, uint32_t target) {
  const size_t k = controls.size();
  if (k == 0) {
    c.add({axis, target, 0, angle, eps});
    return;
  }
  std::vector<bool> pol(k);
  for (size_t i = 0; i < k; ++i)
    pol[i] = ((pattern >> (k - 1 - i)) & 1) != 0;
  if (k == 1) {
    if (!pol[0]) c.x(controls[0]);
    emit_controlled_rotation(c, axis, angle, eps, controls[0], target);
    if (!pol[0]) c.x(controls[0]);
    return;
  }
  AndTree tree = emit_and_tree(c, controls, pol);
  emit_controlled_rotation(c, axis, angle, eps, tree.flag, target);
  emit_and_tree_inverse(c, controls, pol, tree);
}

namespace {

// Shared plan for the balanced AND tree: leaves are the literal wires,
// internal nodes are scratch ancillas combined pairwise.
struct AndPlan {
  // each step: (left wire, right wire, out wire, left literal idx or -1,
  // right literal idx or -1) — literal indices are X-conjugated when negative.
  struct Step {
    uint32_t l, r, out;
    int lit_l, lit_r;
  };
  std::vector<Step> steps;
  uint32_t flag;
};

AndPlan make_plan(Circuit& c, const std::vector<uint32_t>& wires,
                  std::vector<uint32_t>& scratch) {
  AndPlan plan{};
  struct Node {
    uint32_t wire;
    int lit;  // literal index when this is an un-ANDed input, else -1
  };
  std::vector<Node> layer;
  layer.reserve(wires.size());
  for (size_t i = 0; i < wires.size(); ++i)
    layer.push_back({wires[i], static_cast<int>(i)});
  while (layer.size() > 1) {
    std::vector<Node> next;
    for (size_t i = 0; i + 1 < layer.size(); i += 2) {
      uint32_t out = c.alloc_ancilla();
      scratch.push_back(out);
      plan.steps.push_back({layer[i].wire, layer[i + 1].wire, out,
                            layer[i].lit, layer[i + 1].lit});
      next.push_back({out, -1});
    }
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  plan.flag = layer[0].wire;
  return plan;
}

void run_plan(Circuit& c, const AndPlan& plan, const std::vector<bool>& pol,
              bool inverted) {
  auto emit_step = [&](const AndPlan::Step& s) {
    bool nl = s.lit_l >= 0 && !pol[s.lit_l];
    bool nr = s.lit_r >= 0 && !pol[s.lit_r];
    emit_toffoli_pol(c, s.l, !nl, s.r, !nr, s.out);
  };
  if (!inverted) {
    for (const auto& s : plan.steps) emit_step(s);
  } else {
    for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it)
      emit_step(*it);
  }
}

}  // namespace

AndTree emit_and_tree(Circuit& c, const std::vector<uint32_t>& wires,
                      const std::vector<bool>& polarity) {
  if (wires.size() < 2) throw SchemaError("AND tree needs >= 2 literals");
  if (polarity.size() != wires.size())
    throw SchemaError("AND tree polarity size mismatch");
  AndTree t;
  AndPlan plan = make_plan(c, wires, t.scratch);
  run_plan(c, plan, polarity, false);
  t.flag = plan.flag;
  return t;
}

void emit_and_tree_inverse(Circuit& c, const std::vector<uint32_t>& wires,
                           const std::vector<bool>& polarity,
                           const AndTree& tree) {
  // Rebuild the identical plan; allocation order is deterministic, but the
  // plan's scratch wires must be the ones already held by `tree`, so emit
  // against those.
  AndPlan plan{};
  struct Node {
    uint32_t wire;
    int lit;
  };
  std::vector<Node> layer;
  for (size_t i = 0; i < wires.size(); ++i)
    layer.push_back({wires[i], static_cast<int>(i)});
  size_t next_scratch = 0;
  while (layer.size() > 1) {
    std::vector<Node> next;
    for (size_t i = 0; i + 1 < layer.size(); i += 2) {
      uint32_t out = tree.scratch.at(next_scratch++);
      plan.steps.push_back({layer[i].wire, layer[i + 1].wire, out,
                            layer[i].lit, layer[i + 1].lit});
      next.push_back({out, -1});
    }
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  run_plan(c, plan, polarity, true);
  c.free_ancillas(tree.scratch);
}

void emit_fanout(Circuit& c, uint32_t src, const std::vector<uint32_t>& dst) {
  std::vector<uint32_t> have{src};
  size_t next = 0;
  while (next < dst.size()) {
    const size_t n_have = have.size();
    for (size_t i = 0; i < n_have && next < dst.size(); ++i) {
      c.cnot(have[i], dst[next]);
      have.push_back(dst[next]);
      ++next;
    }
  }
}

void emit_fanout_inverse(Circuit& c, uint32_t src,
                         const std::vector<uint32_t>& dst) {
  std::vector<std::pair<uint32_t, uint32_t>> ops;
  std::vector<uint32_t> have{src};
  size_t next = 0;
  while (next < dst.size()) {
    const size_t n_have = have.size();
    for (size_t i = 0; i < n_have && next < dst.size(); ++i) {
      ops.emplace_back(have[i], dst[next]);
      have.push_back(dst[next]);
      ++next;
    }
  }
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    c.cnot(it->first, it->second);
}

void emit_controlled_pauli(Circuit& c, const PauliString& p, uint32_t ctrl,
                           const std::vector<uint32_t>& targets) {
  if (p.letter.size() != targets.size())
    throw SchemaError("controlled Pauli letter/target count mismatch");
  for (unsigned k = 0; k < p.phase_quarter % 4; ++k) c.s(ctrl);
  for (size_t l = 0; l < targets.size(); ++l) {
    const uint32_t t = targets[l];
    switch (p.letter[l]) {
      case 0:
        break;
      case 1:
        c.cnot(ctrl, t);
        break;
      case 2:  // CY = (I ⊗ S) CX (I ⊗ S+)
        c.sdg(t);
        c.cnot(ctrl, t);
        c.s(t);
        break;
      case 3:  // CZ = (I ⊗ H) CX (I ⊗ H)
        c.h(t);
        c.cnot(ctrl, t);
        c.h(t);
        break;
    }
  }
}

void emit_pauli(Circuit& c, const PauliString& p,
                const std::vector<uint32_t>& targets) {
  if (p.letter.size() != targets.size())
    throw SchemaError("Pauli letter/target count mismatch");
  static const cplx iunit{0, 1};
  cplx pre{1, 0};
  for (unsigned k = 0; k < p.phase_quarter % 4; ++k) pre *= iunit;
  c.scale_phase(pre);
  for (size_t l = 0; l < targets.size(); ++l) {
    const uint32_t t = targets[l];
    switch (p.letter[l]) {
      case 0:
        break;
      case 1:
        c.x(t);
        break;
      case 2:
        emit_y(c, t);
        break;
      case 3:
        c.z(t);
        break;
    }
  }
}

}  // namespace qamc
