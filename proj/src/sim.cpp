// SPDX-License-Identifier: MIT

#include "qamc/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qamc {

namespace {

struct Mat2 {
  cplx a00{1, 0}, a01{0, 0}, a10{0, 0}, a11{1, 0};
};

Mat2 mul(const Mat2& l, const Mat2& r) {
  return {l.a00 * r.a00 + l.a01 * r.a10, l.a00 * r.a01 + l.a01 * r.a11,
          l.a10 * r.a00 + l.a11 * r.a10, l.a10 * r.a01 + l.a11 * r.a11};
}

Mat2 gate_matrix(const Gate& g) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  const cplx i{0, 1};
  switch (g.kind) {
    case GateKind::H:
      return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::S:
      return {1, 0, 0, i};
    case GateKind::Sdg:
      return {1, 0, 0, -i};
    case GateKind::T:
      return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
    case GateKind::Tdg:
      return {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)};
    case GateKind::X:
      return {0, 1, 1, 0};
    case GateKind::Z:
      return {1, 0, 0, -1};
    case GateKind::Rz:
      return {std::polar(1.0, -g.angle / 2), 0, 0,
              std::polar(1.0, g.angle / 2)};
    case GateKind::Ry: {
      const double ch = std::cos(g.angle / 2), sh = std::sin(g.angle / 2);
      return {ch, -sh, sh, ch};
    }
    case GateKind::Cnot:
      break;
  }
  throw std::logic_error("gate has no 2x2 matrix");
}

bool is_diagonal(const Mat2& m) {
  return m.a01 == cplx{0, 0} && m.a10 == cplx{0, 0};
}

// --- engines ---------------------------------------------------------------

struct DenseEngine {
  // Folding runs of single-qubit gates into one 2x2 per wire is a pure win
  // on dense vectors.
  static constexpr bool kFold = true;

  std::vector<cplx>& v;
  uint32_t q;

  void apply1(uint32_t w, const Mat2& m) {
    const size_t stride = size_t{1} << (q - 1 - w);
    if (is_diagonal(m)) {
      for (size_t base = 0; base < v.size(); base += 2 * stride)
        for (size_t off = 0; off < stride; ++off) {
          v[base + off] *= m.a00;
          v[base + off + stride] *= m.a11;
        }
      return;
    }
    for (size_t base = 0; base < v.size(); base += 2 * stride)
      for (size_t off = 0; off < stride; ++off) {
        const size_t i0 = base + off, i1 = i0 + stride;
        const cplx v0 = v[i0], v1 = v[i1];
        v[i0] = m.a00 * v0 + m.a01 * v1;
        v[i1] = m.a10 * v0 + m.a11 * v1;
      }
  }

  void cx(uint32_t c, uint32_t t) {
    const size_t mc = size_t{1} << (q - 1 - c);
    const size_t mt = size_t{1} << (q - 1 - t);
    for (size_t i = 0; i < v.size(); ++i)
      if ((i & mc) && !(i & mt)) std::swap(v[i], v[i | mt]);
  }
};

struct SparseEngine {
  // Folding is disabled here: deferring a Toffoli's closing H until the next
  // CNOT on that wire leaves the tracked state mid-stream in superposition,
  // and with many clean-later ancillas (AND-tree flags) the branch count
  // grows as 2^flags.  Applying every gate immediately recombines each pair
  // on the spot and keeps permutation-like circuits at O(1) branches.
  static constexpr bool kFold = false;

  SparseAmps& amps;
  const RunCaps& caps;

  void check_cap() const {
    if (amps.size() > caps.branch_cap)
      throw CapError("sparse simulation exceeded " +
                     std::to_string(caps.branch_cap) + " branches");
  }

  void apply1(uint32_t w, const Mat2& m) {
    if (is_diagonal(m)) {
      for (auto& [k, a] : amps) a *= k.bit(w) ? m.a11 : m.a00;
      return;
    }
    SparseAmps next;
    next.reserve(amps.size() * 2);
    const double tol = caps.drop_tol;
    auto deposit = [&](const BasisKey& k, cplx a) {
      if (std::abs(a.real()) > tol || std::abs(a.imag()) > tol) {
        auto [it, fresh] = next.try_emplace(k, a);
        if (!fresh) it->second += a;
      }
    };
    for (const auto& [k, a] : amps) {
      BasisKey k0 = k, k1 = k;
      if (k.bit(w)) {
        k0.flip_bit(w);
        deposit(k0, m.a01 * a);
        deposit(k1, m.a11 * a);
      } else {
        k1.flip_bit(w);
        deposit(k0, m.a00 * a);
        deposit(k1, m.a10 * a);
      }
    }
    amps = std::move(next);
    check_cap();
  }

  void cx(uint32_t c, uint32_t t) {
    SparseAmps next;
    next.reserve(amps.size());
    for (const auto& [k, a] : amps) {
      BasisKey nk = k;
      if (k.bit(c)) nk.flip_bit(t);
      next.emplace(nk, a);
    }
    amps = std::move(next);
  }
};

// Streams the circuit's gates through an engine; when the engine opts in,
// runs of single-qubit gates are folded into one 2x2 per wire.
template <typename Engine>
void run_gates(const Circuit& c, Engine& eng) {
  if constexpr (!Engine::kFold) {
    for (const auto& g : c.gates()) {
      if (g.kind == GateKind::Cnot)
        eng.cx(g.q0, g.q1);
      else
        eng.apply1(g.q0, gate_matrix(g));
    }
    return;
  }
  std::vector<Mat2> pending(c.n_total());
  std::vector<bool> dirty(c.n_total(), false);
  auto flush = [&](uint32_t w) {
    if (dirty[w]) {
      eng.apply1(w, pending[w]);
      pending[w] = Mat2{};
      dirty[w] = false;
    }
  };
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Cnot) {
      flush(g.q0);
      flush(g.q1);
      eng.cx(g.q0, g.q1);
    } else {
      pending[g.q0] = mul(gate_matrix(g), pending[g.q0]);
      dirty[g.q0] = true;
    }
  }
  for (uint32_t w = 0; w < c.n_total(); ++w) flush(w);
}

}  // namespace

SparseState basis_state(uint32_t n_wires, uint64_t x, uint32_t n_index) {
  if (n_wires > kMaxSparseWires)
    throw CapError("sparse engine limited to 256 wires");
  SparseState s;
  s.n_wires = n_wires;
  BasisKey k{};
  for (uint32_t i = 0; i < n_index; ++i)
    k.set_bit(i, (x >> (n_index - 1 - i)) & 1);
  s.amps.emplace(k, cplx{1, 0});
  return s;
}

SparseState run_sparse(const Circuit& c, SparseState init,
                       const RunCaps& caps) {
  if (c.n_total() > kMaxSparseWires)
    throw CapError("sparse engine limited to 256 wires");
  if (init.n_wires < c.n_total()) init.n_wires = c.n_total();
  SparseEngine eng{init.amps, caps};
  run_gates(c, eng);
  const cplx ph = c.global_phase();
  if (ph != cplx{1, 0})
    for (auto& [k, a] : init.amps) a *= ph;
  return init;
}

std::vector<cplx> run_dense(const Circuit& c, std::vector<cplx> init) {
  if (c.n_total() > 20) throw CapError("dense engine limited to 20 wires");
  if (init.size() != size_t{1} << c.n_total())
    throw SchemaError("dense initial state has wrong dimension");
  DenseEngine eng{init, c.n_total()};
  run_gates(c, eng);
  const cplx ph = c.global_phase();
  if (ph != cplx{1, 0})
    for (auto& a : init) a *= ph;
  return init;
}

std::vector<cplx> unitary_of(const Circuit& c) {
  if (c.n_total() > 12) throw CapError("unitary_of limited to 12 wires");
  const size_t dim = size_t{1} << c.n_total();
  std::vector<cplx> u(dim * dim);
  for (size_t col = 0; col < dim; ++col) {
    std::vector<cplx> e(dim, cplx{0, 0});
    e[col] = 1;
    e = run_dense(c, std::move(e));
    for (size_t row = 0; row < dim; ++row) u[row * dim + col] = e[row];
  }
  return u;
}

BlockProbe probe_block(const Circuit& c, uint32_t n_block,
                       const RunCaps& caps) {
  if (n_block > 12) throw CapError("probe_block limited to 12 block wires");
  if (n_block > c.n_total()) throw SchemaError("block wider than circuit");
  BlockProbe out;
  out.dim = size_t{1} << n_block;
  out.block.assign(out.dim * out.dim, cplx{0, 0});
  for (uint64_t col = 0; col < out.dim; ++col) {
    SparseState s =
        run_sparse(c, basis_state(c.n_total(), col, n_block), caps);
    double leak2 = 0.0;
    for (const auto& [k, a] : s.amps) {
      bool clean = true;
      for (uint32_t w = n_block; w < c.n_total() && clean; ++w)
        if (k.bit(w)) clean = false;
      if (!clean) {
        leak2 += std::norm(a);
        continue;
      }
      uint64_t row = 0;
      for (uint32_t w = 0; w < n_block; ++w)
        row = (row << 1) | (k.bit(w) ? 1 : 0);
      out.block[row * out.dim + col] = a;
    }
    out.leakage = std::max(out.leakage, std::sqrt(leak2));
  }
  return out;
}

StateProbe probe_state(const Circuit& c, const RunCaps& caps) {
  if (c.n_data() > 20) throw CapError("probe_state limited to 20 data wires");
  StateProbe out;
  out.state.assign(size_t{1} << c.n_data(), cplx{0, 0});
  SparseState s = run_sparse(c, basis_state(c.n_total(), 0, 0), caps);
  double leak2 = 0.0;
  for (const auto& [k, a] : s.amps) {
    bool clean = true;
    for (uint32_t w = c.n_data(); w < c.n_total() && clean; ++w)
      if (k.bit(w)) clean = false;
    if (!clean) {
      leak2 += std::norm(a);
      continue;
    }
    uint64_t idx = 0;
    for (uint32_t w = 0; w < c.n_data(); ++w)
      idx = (idx << 1) | (k.bit(w) ? 1 : 0);
    out.state[idx] = a;
  }
  out.leakage = std::sqrt(leak2);
  return out;
}

double state_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw SchemaError("state dimension mismatch");
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d2 += std::norm(a[i] - b[i]);
  return std::sqrt(d2);
}

double state_distance_up_to_phase(const std::vector<cplx>& a,
                                  const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw SchemaError("state dimension mismatch");
  double na = 0.0, nb = 0.0;
  cplx ov{0, 0};
  for (size_t i = 0; i < a.size(); ++i) {
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
    ov += std::conj(b[i]) * a[i];
  }
  const double d2 = na + nb - 2.0 * std::abs(ov);
  return std::sqrt(std::max(0.0, d2));
}

double spectral_distance(const std::vector<cplx>& a,
                         const std::vector<cplx>& b, size_t dim) {
  if (a.size() != dim * dim || b.size() != dim * dim)
    throw SchemaError("spectral_distance dimension mismatch");
  if (dim > 512) throw CapError("spectral_distance limited to dim 512");
  std::vector<cplx> m(dim * dim);
  bool all_zero = true;
  for (size_t i = 0; i < m.size(); ++i) {
    m[i] = a[i] - b[i];
    if (m[i] != cplx{0, 0}) all_zero = false;
  }
  if (all_zero) return 0.0;
  auto matvec = [&](const std::vector<cplx>& x, bool adj) {
    std::vector<cplx> y(dim, cplx{0, 0});
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c)
        if (adj)
          y[c] += std::conj(m[r * dim + c]) * x[r];
        else
          y[r] += m[r * dim + c] * x[c];
    return y;
  };
  double best = 0.0;
  for (uint64_t seed : {0x9e3779b97f4a7c15ull, 0xdeadbeefcafef00dull,
                        0x0123456789abcdefull}) {
    std::mt19937_64 rng(seed);
    std::vector<cplx> v(dim);
    double nrm = 0.0;
    for (auto& x : v) {
      // uniform in [-1,1]^2 via 53-bit mantissa draws — platform-stable
      const double re = (rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
      const double im = (rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
      x = {re, im};
      nrm += std::norm(x);
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    double lam = 0.0;
    for (int it = 0; it < 400; ++it) {
      auto w = matvec(matvec(v, false), true);
      double wn = 0.0;
      for (const auto& x : w) wn += std::norm(x);
      wn = std::sqrt(wn);
      if (wn == 0.0) {
        lam = 0.0;
        break;
      }
      const double new_lam = wn;  // |M^dag M v| -> lambda_max
      for (size_t i = 0; i < dim; ++i) v[i] = w[i] / wn;
      if (it > 24 && std::abs(new_lam - lam) <= 1e-14 * std::max(1.0, lam)) {
        lam = new_lam;
        break;
      }
      lam = new_lam;
    }
    best = std::max(best, std::sqrt(lam));
  }
  return best;
}

double entrywise_distance(const std::vector<cplx>& a,
                          const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw SchemaError("matrix dimension mismatch");
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace qamc
