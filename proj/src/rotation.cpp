// SPDX-License-Identifier: MIT

#include "qamc/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <unordered_map>

namespace qamc {

namespace {

constexpr double kPi = std::numbers::pi;

// ---- quaternions: U = w*I - i(x*X + y*Y + z*Z), |q| = 1 -------------------

struct Quat {
  double w = 1, x = 0, y = 0, z = 0;
};

Quat qmul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat qconj(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }

double qdot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

Quat qneg(const Quat& a) { return {-a.w, -a.x, -a.y, -a.z}; }

// Canonical sign: first component (order w,x,y,z) larger than 1e-12 in
// magnitude is made positive.  Returns true when the sign was flipped.
bool canonicalize(Quat& q) {
  const double comps[4] = {q.w, q.x, q.y, q.z};
  for (double c : comps) {
    if (c > 1e-12) return false;
    if (c < -1e-12) {
      q = qneg(q);
      return true;
    }
  }
  return false;
}

void renormalize(Quat& q) {
  const double n = std::sqrt(qdot(q, q));
  q.w /= n;
  q.x /= n;
  q.y /= n;
  q.z /= n;
}

/// Projective operator-norm distance between the unitaries the two unit
/// quaternions represent: the chordal distance min(|p-q|, |p+q|).
double proj_distance(const Quat& a, const Quat& b) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(qdot(a, b))));
}

Quat quat_rz(double theta) { return {std::cos(theta / 2), 0, 0,
                                     std::sin(theta / 2)}; }
Quat quat_ry(double theta) { return {std::cos(theta / 2), 0,
                                     std::sin(theta / 2), 0}; }
Quat quat_rx(double theta) { return {std::cos(theta / 2),
                                     std::sin(theta / 2), 0, 0}; }

// Elementary gates as (phase, SU(2) quaternion): gate = e^{i phase} * SU2(q).
struct PhasedQuat {
  Quat q;
  double phase;
};

PhasedQuat gate_quat(GateKind k) {
  constexpr double r = 0.70710678118654752440;
  switch (k) {
    case GateKind::H:
      return {{0, r, 0, r}, kPi / 2};
    case GateKind::S:
      return {quat_rz(kPi / 2), kPi / 4};
    case GateKind::Sdg:
      return {quat_rz(-kPi / 2), -kPi / 4};
    case GateKind::T:
      return {quat_rz(kPi / 4), kPi / 8};
    case GateKind::Tdg:
      return {quat_rz(-kPi / 4), -kPi / 8};
    case GateKind::X:
      return {{0, 1, 0, 0}, kPi / 2};
    case GateKind::Z:
      return {{0, 0, 0, 1}, kPi / 2};
    default:
      throw std::logic_error("gate_quat: not a database gate");
  }
}

GateKind dagger_1q(GateKind k) {
  switch (k) {
    case GateKind::S:
      return GateKind::Sdg;
    case GateKind::Sdg:
      return GateKind::S;
    case GateKind::T:
      return GateKind::Tdg;
    case GateKind::Tdg:
      return GateKind::T;
    default:
      return k;
  }
}

std::vector<GateKind> invert_sequence(const std::vector<GateKind>& g) {
  std::vector<GateKind> out;
  out.reserve(g.size());
  for (auto it = g.rbegin(); it != g.rend(); ++it)
    out.push_back(dagger_1q(*it));
  return out;
}

// A synthesized fragment: gates in circuit order plus the product quaternion
// (matrix product of the gates, SU(2)-normalized, sign-canonical not
// maintained — tracked exactly as composed).
struct Seq {
  std::vector<GateKind> gates;
  Quat q{1, 0, 0, 0};
  uint64_t t = 0;
};

Seq seq_concat(const Seq& first_applied, const Seq& then_applied) {
  Seq out;
  out.gates = first_applied.gates;
  out.gates.insert(out.gates.end(), then_applied.gates.begin(),
                   then_applied.gates.end());
  out.q = qmul(then_applied.q, first_applied.q);  // matrix order
  out.t = first_applied.t + then_applied.t;
  return out;
}

Seq seq_inverse(const Seq& s) {
  return {invert_sequence(s.gates), qconj(s.q), s.t};
}

}  // namespace

// ---- database ---------------------------------------------------------------

struct RotationSynthesizer::Impl {
  Options opt;

  struct Entry {
    Quat q;          // canonical sign
    double phase;    // gate product = e^{i phase} * SU2(q) (sign-adjusted)
    uint32_t word;   // lead(1 bit) | syllable count(5 bits) | syllable bits
    uint8_t cliff;
    uint8_t t;
  };
  std::vector<Entry> entries;  // ordered by (t, word, cliff): lookup order

  // 24 projective Cliffords: factor lists in matrix order, quat, phase.
  struct Cliff {
    std::vector<GateKind> factors;
    Quat q;
    double phase;
  };
  std::vector<Cliff> cliffords;

  // dense 4-d cell grid over the quaternion ball, CSR layout, each entry
  // inserted under both signs
  int grid_g = 0;
  std::vector<uint32_t> cell_start;
  std::vector<uint32_t> cell_items;

  std::vector<uint32_t> mitm_subset;  // entry indices with t <= mitm_t_cap

  std::map<std::pair<uint64_t, uint64_t>, RotationResult> cache_rz;
  std::map<std::pair<uint64_t, uint64_t>, RotationResult> cache_ry;

  // ---- construction ---------------------------------------------------------

  void build_cliffords() {
    cliffords.clear();
    struct Node {
      Quat q;
      double phase;
      std::vector<GateKind> factors;
    };
    auto key_of = [](const Quat& q) {
      auto r = [](double v) { return std::llround(v * 1e6); };
      return std::to_string(r(q.w)) + "," + std::to_string(r(q.x)) + "," +
             std::to_string(r(q.y)) + "," + std::to_string(r(q.z));
    };
    std::unordered_map<std::string, size_t> seen;
    std::vector<Node> frontier{{Quat{1, 0, 0, 0}, 0.0, {}}};
    seen[key_of(Quat{1, 0, 0, 0})] = 0;
    cliffords.push_back({{}, Quat{1, 0, 0, 0}, 0.0});
    const GateKind alphabet[] = {GateKind::H, GateKind::S, GateKind::Sdg,
                                 GateKind::X, GateKind::Z};
    while (!frontier.empty() && cliffords.size() < 24) {
      std::vector<Node> next;
      for (const auto& node : frontier) {
        for (GateKind g : alphabet) {
          PhasedQuat pg = gate_quat(g);
          Quat q = qmul(node.q, pg.q);  // matrix order: node * gate
          double phase = node.phase + pg.phase;
          if (canonicalize(q)) phase += kPi;
          renormalize(q);
          const std::string key = key_of(q);
          if (seen.count(key)) continue;
          Node n{q, std::remainder(phase, 2 * kPi), node.factors};
          n.factors.push_back(g);
          seen[key] = cliffords.size();
          cliffords.push_back({n.factors, n.q, n.phase});
          next.push_back(std::move(n));
        }
      }
      frontier = std::move(next);
    }
    if (cliffords.size() != 24)
      throw std::logic_error("projective Clifford enumeration failed");
  }

  // word encoding: bit0 = lead T, bits [1,6) = syllable count, bits [6,...)
  // = syllable choices (0 = HT, 1 = SHT), syllable 0 first in matrix order
  static void word_factors(uint32_t word, std::vector<GateKind>& out) {
    out.clear();
    if (word & 1) out.push_back(GateKind::T);
    const uint32_t k = (word >> 1) & 31;
    for (uint32_t i = 0; i < k; ++i) {
      if ((word >> (6 + i)) & 1) out.push_back(GateKind::S);
      out.push_back(GateKind::H);
      out.push_back(GateKind::T);
    }
  }

  void build_entries() {
    entries.clear();
    // t = 0: the Cliffords themselves
    for (size_t c = 0; c < cliffords.size(); ++c) {
      Entry e{cliffords[c].q, cliffords[c].phase, 0,
              static_cast<uint8_t>(c), 0};
      entries.push_back(e);
    }
    std::vector<GateKind> factors;
    for (int t = 1; t <= opt.db_t_cap; ++t) {
      // words without a lead T (k = t syllables), then with one (k = t-1)
      for (int lead = 0; lead <= 1; ++lead) {
        const int k = t - lead;
        if (k < 0) continue;
        if (lead == 0 && k == 0) continue;
        const uint32_t n_bits = uint32_t{1} << k;
        for (uint32_t bits = 0; bits < n_bits; ++bits) {
          const uint32_t word =
              static_cast<uint32_t>(lead) | (static_cast<uint32_t>(k) << 1) |
              (bits << 6);
          word_factors(word, factors);
          Quat q{1, 0, 0, 0};
          double phase = 0;
          for (GateKind g : factors) {
            PhasedQuat pg = gate_quat(g);
            q = qmul(q, pg.q);
            phase += pg.phase;
          }
          for (size_t c = 0; c < cliffords.size(); ++c) {
            Quat eq = qmul(q, cliffords[c].q);
            double ep = phase + cliffords[c].phase;
            if (canonicalize(eq)) ep += kPi;
            renormalize(eq);
            entries.push_back({eq, std::remainder(ep, 2 * kPi), word,
                               static_cast<uint8_t>(c),
                               static_cast<uint8_t>(t)});
          }
        }
      }
    }
  }

  int cell_coord(double v) const {
    int c = static_cast<int>(std::floor((v + 1.0) / opt.grid_h));
    return std::clamp(c, 0, grid_g - 1);
  }

  size_t cell_index(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * grid_g + b) * grid_g + c) * grid_g + d;
  }

  void build_grid() {
    grid_g = static_cast<int>(std::ceil(2.0 / opt.grid_h)) + 1;
    const size_t n_cells =
        static_cast<size_t>(grid_g) * grid_g * grid_g * grid_g;
    std::vector<uint32_t> counts(n_cells + 1, 0);
    auto cell_of = [&](const Quat& q) {
      return cell_index(cell_coord(q.w), cell_coord(q.x), cell_coord(q.y),
                        cell_coord(q.z));
    };
    for (const auto& e : entries) {
      ++counts[cell_of(e.q) + 1];
      ++counts[cell_of(qneg(e.q)) + 1];
    }
    cell_start.assign(counts.begin(), counts.end());
    for (size_t i = 1; i < cell_start.size(); ++i)
      cell_start[i] += cell_start[i - 1];
    cell_items.assign(cell_start.back(), 0);
    std::vector<uint32_t> fill(cell_start.begin(), cell_start.end() - 1);
    for (uint32_t i = 0; i < entries.size(); ++i) {
      cell_items[fill[cell_of(entries[i].q)]++] = i;
      cell_items[fill[cell_of(qneg(entries[i].q))]++] = i;
    }
    mitm_subset.clear();
    for (uint32_t i = 0; i < entries.size(); ++i)
      if (entries[i].t <= opt.mitm_t_cap) mitm_subset.push_back(i);
  }

  void build() {
    if (!entries.empty()) return;
    build_cliffords();
    build_entries();
    build_grid();
  }

  // ---- queries ---------------------------------------------------------------

  /// Best |dot| entry near q, probing the 16 cells nearest the query point.
  int grid_nearest(const Quat& q) const {
    int best = -1;
    double best_dot = -1;
    int base[4];
    const double coords[4] = {q.w, q.x, q.y, q.z};
    for (int d = 0; d < 4; ++d) {
      const double f = (coords[d] + 1.0) / opt.grid_h - 0.5;
      base[d] = std::clamp(static_cast<int>(std::floor(f)), 0, grid_g - 1);
    }
    for (int m = 0; m < 16; ++m) {
      int c[4];
      bool ok = true;
      for (int d = 0; d < 4; ++d) {
        c[d] = base[d] + ((m >> d) & 1);
        if (c[d] >= grid_g) ok = false;
      }
      if (!ok) continue;
      const size_t ci = cell_index(c[0], c[1], c[2], c[3]);
      for (uint32_t k = cell_start[ci]; k < cell_start[ci + 1]; ++k) {
        const uint32_t idx = cell_items[k];
        const double d = std::abs(qdot(entries[idx].q, q));
        if (d > best_dot) {
          best_dot = d;
          best = static_cast<int>(idx);
        }
      }
    }
    return best;
  }

  Seq entry_seq(uint32_t idx) const {
    const Entry& e = entries[idx];
    std::vector<GateKind> factors;
    word_factors(e.word, factors);
    const auto& cf = cliffords[e.cliff].factors;
    factors.insert(factors.end(), cf.begin(), cf.end());
    Seq s;
    s.gates.assign(factors.rbegin(), factors.rend());  // circuit order
    s.q = entries[idx].q;
    s.t = e.t;
    return s;
  }

  /// Stage 1: ordered scan for the minimum-T database hit within eps.
  int db_scan(const Quat& target, double eps) const {
    for (uint32_t i = 0; i < entries.size(); ++i)
      if (proj_distance(entries[i].q, target) <= eps)
        return static_cast<int>(i);
    return -1;
  }

  /// Stage 2: meet-in-the-middle A*B over the low-T subset and the grid.
  Seq mitm(const Quat& target) const {
    double best = 1e9;
    uint32_t best_a = 0, best_b = 0;
    for (uint32_t ai : mitm_subset) {
      const Quat want_b = qmul(qconj(entries[ai].q), target);
      const int bi = grid_nearest(want_b);
      if (bi < 0) continue;
      const Quat prod = qmul(entries[ai].q, entries[bi].q);
      const double d = proj_distance(prod, target);
      if (d < best) {
        best = d;
        best_a = ai;
        best_b = static_cast<uint32_t>(bi);
      }
    }
    // product A*B: B applied first in circuit order
    return seq_concat(entry_seq(best_b), entry_seq(best_a));
  }

  /// Stage 3 support: balanced group commutator decomposition.  Returns
  /// V', W' with [V', W'] = delta (delta given sign-canonical, w >= 0).
  static void gc_decompose(const Quat& delta, Quat& v_out, Quat& w_out) {
    const double w = std::clamp(delta.w, -1.0, 1.0);
    const double phi = 2.0 * std::acos(std::abs(w));
    double nx = delta.x, ny = delta.y, nz = delta.z;
    const double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (nn < 1e-15) {
      v_out = w_out = Quat{1, 0, 0, 0};
      return;
    }
    nx /= nn;
    ny /= nn;
    nz /= nn;
    const double theta =
        2.0 * std::asin(std::clamp(std::sqrt(std::sin(phi / 4.0)), 0.0, 1.0));
    const Quat v = quat_rx(theta), wq = quat_ry(theta);
    Quat k = qmul(qmul(v, wq), qmul(qconj(v), qconj(wq)));
    // axis of k -> axis of delta
    double mx = k.x, my = k.y, mz = k.z;
    const double mn = std::sqrt(mx * mx + my * my + mz * mz);
    Quat s{1, 0, 0, 0};
    if (mn > 1e-15) {
      mx /= mn;
      my /= mn;
      mz /= mn;
      double cx = my * nz - mz * ny;
      double cy = mz * nx - mx * nz;
      double cz = mx * ny - my * nx;
      const double dot = std::clamp(mx * nx + my * ny + mz * nz, -1.0, 1.0);
      const double cn = std::sqrt(cx * cx + cy * cy + cz * cz);
      if (cn > 1e-12) {
        const double omega = std::acos(dot);
        const double sc = std::sin(omega / 2) / cn;
        s = {std::cos(omega / 2), cx * sc, cy * sc, cz * sc};
      } else if (dot < 0) {
        // antiparallel: rotate pi about any axis orthogonal to m
        double ax = -my, ay = mx, az = 0;
        double an = std::sqrt(ax * ax + ay * ay);
        if (an < 1e-12) {
          ax = 1;
          ay = 0;
          az = 0;
          an = 1;
        }
        s = {0, ax / an, ay / an, az / an};
      }
    }
    v_out = qmul(qmul(s, v), qconj(s));
    w_out = qmul(qmul(s, wq), qconj(s));
  }

  Seq basic_approx(const Quat& target) const {
    Seq best;
    const int g = grid_nearest(target);
    if (g >= 0) best = entry_seq(static_cast<uint32_t>(g));
    Seq m = mitm(target);
    if (proj_distance(m.q, target) < proj_distance(best.q, target)) best = m;
    return best;
  }

  Seq sk_full(const Quat& target, int level) const {
    if (level == 0) return basic_approx(target);
    Seq a = sk_full(target, level - 1);
    Quat delta = qmul(target, qconj(a.q));
    canonicalize(delta);
    renormalize(delta);
    Quat vq, wq;
    gc_decompose(delta, vq, wq);
    Seq va = sk_full(vq, level - 1);
    Seq wa = sk_full(wq, level - 1);
    // result = Va Wa Va^dag Wa^dag A  (matrix order)
    Seq out = seq_concat(a, seq_inverse(wa));
    out = seq_concat(out, seq_inverse(va));
    out = seq_concat(out, wa);
    out = seq_concat(out, va);
    return out;
  }

  RotationResult synth_unitary(const Quat& target, double eps) const {
    // stage 1: exact-database minimum-T hit
    const int hit = db_scan(target, eps);
    if (hit >= 0) {
      Seq s = entry_seq(static_cast<uint32_t>(hit));
      return {std::move(s.gates), proj_distance(entries[hit].q, target), s.t};
    }
    // stage 2: meet in the middle
    Seq a = basic_approx(target);
    double d = proj_distance(a.q, target);
    if (d <= eps) return {std::move(a.gates), d, a.t};
    // stage 3: commutator ladder
    for (int level = 1; level <= opt.sk_max_level; ++level) {
      Quat delta = qmul(target, qconj(a.q));
      canonicalize(delta);
      renormalize(delta);
      Quat vq, wq;
      gc_decompose(delta, vq, wq);
      Seq va = sk_full(vq, level - 1);
      Seq wa = sk_full(wq, level - 1);
      Seq next = seq_concat(a, seq_inverse(wa));
      next = seq_concat(next, seq_inverse(va));
      next = seq_concat(next, wa);
      next = seq_concat(next, va);
      a = std::move(next);
      d = proj_distance(a.q, target);
      if (d <= eps) return {std::move(a.gates), d, a.t};
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "rotation synthesis cap reached: requested accuracy %.3g, "
                  "achievable %.3g at refinement level %d",
                  eps, d, opt.sk_max_level);
    throw CapError(msg);
  }
};

RotationSynthesizer::RotationSynthesizer(Options opt)
    : impl_(std::make_unique<Impl>()) {
  impl_->opt = opt;
}

RotationSynthesizer::~RotationSynthesizer() = default;

size_t RotationSynthesizer::database_size() const {
  impl_->build();
  return impl_->entries.size();
}

const RotationResult& RotationSynthesizer::synth_rz(double angle, double eps) {
  if (!(eps > 0)) throw SchemaError("rotation accuracy must be positive");
  impl_->build();
  uint64_t abits, ebits;
  static_assert(sizeof(double) == sizeof(uint64_t));
  const double mag = std::abs(angle);
  std::memcpy(&abits, &mag, 8);
  std::memcpy(&ebits, &eps, 8);
  auto key = std::make_pair(abits, ebits);
  auto it = impl_->cache_rz.find(key);
  if (it == impl_->cache_rz.end()) {
    RotationResult r = impl_->synth_unitary(quat_rz(mag), eps);
    it = impl_->cache_rz.emplace(key, std::move(r)).first;
  }
  if (angle >= 0) return it->second;
  // negative angles: exactly the inverse sequence of the positive request
  uint64_t nbits = abits | (uint64_t{1} << 63);
  auto nkey = std::make_pair(nbits, ebits);
  auto nit = impl_->cache_rz.find(nkey);
  if (nit == impl_->cache_rz.end()) {
    RotationResult inv{invert_sequence(it->second.gates), it->second.achieved,
                       it->second.t_count};
    nit = impl_->cache_rz.emplace(nkey, std::move(inv)).first;
  }
  return nit->second;
}

const RotationResult& RotationSynthesizer::synth_ry(double angle, double eps) {
  impl_->build();
  uint64_t abits, ebits;
  std::memcpy(&abits, &angle, 8);
  std::memcpy(&ebits, &eps, 8);
  // Ry(t) = S H Rz(t) H S+ : circuit order S+, H, rz..., H, S.
  auto key = std::make_pair(abits, ebits);
  auto it = impl_->cache_ry.find(key);
  if (it != impl_->cache_ry.end()) return it->second;
  const RotationResult& rz = synth_rz(angle, eps);
  RotationResult r;
  r.gates.reserve(rz.gates.size() + 4);
  r.gates.push_back(GateKind::Sdg);
  r.gates.push_back(GateKind::H);
  r.gates.insert(r.gates.end(), rz.gates.begin(), rz.gates.end());
  r.gates.push_back(GateKind::H);
  r.gates.push_back(GateKind::S);
  r.achieved = rz.achieved;
  r.t_count = rz.t_count;
  return impl_->cache_ry.emplace(key, std::move(r)).first->second;
}

RotationResult RotationSynthesizer::synth_rz_phase_exact(double angle,
                                                         double eps) {
  if (!(eps > 0)) throw SchemaError("rotation accuracy must be positive");
  impl_->build();
  const Quat target = quat_rz(angle);
  double best_possible = 4.0;
  for (uint32_t i = 0; i < impl_->entries.size(); ++i) {
    const auto& e = impl_->entries[i];
    const double dp = proj_distance(e.q, target);
    if (dp > eps) {
      best_possible = std::min(best_possible, dp);
      continue;
    }
    // exact metric: entry matrix = e^{i phase} SU2(q); appending k copies of
    // (HS)^3 = e^{i pi/4} I shifts the phase by k pi/4 without moving the
    // projective point.  || e^{i p} P - R || = max_pm 2|sin((p +- d/2)/2)|
    // with cos(d/2) = <P, R>.
    const double dot = std::clamp(qdot(e.q, target), -1.0, 1.0);
    const double half_delta = std::acos(std::abs(dot));
    const double base_phase =
        dot >= 0 ? e.phase : e.phase + kPi;  // -P = e^{i pi} P
    for (int k = 0; k < 8; ++k) {
      const double p = base_phase + k * kPi / 4;
      const double d1 = 2 * std::abs(std::sin((p + half_delta) / 2));
      const double d2 = 2 * std::abs(std::sin((p - half_delta) / 2));
      const double d = std::max(d1, d2);
      best_possible = std::min(best_possible, d);
      if (d <= eps) {
        Seq s = impl_->entry_seq(i);
        for (int rep = 0; rep < k; ++rep)
          for (GateKind g : {GateKind::S, GateKind::H, GateKind::S,
                             GateKind::H, GateKind::S, GateKind::H})
            s.gates.push_back(g);
        return {std::move(s.gates), d, s.t};
      }
    }
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "phase-exact synthesis unreachable within the database: "
                "requested %.3g, achievable %.3g",
                eps, best_possible);
  throw CapError(msg);
}

void RotationSynthesizer::save_database(const std::string& path) const {
  impl_->build();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SchemaError("cannot write rotation database: " + path);
  const char magic[8] = {'q', 'a', 'm', 'c', 'r', 'd', 'b', '1'};
  os.write(magic, 8);
  const uint64_t n = impl_->entries.size();
  const int32_t tcap = impl_->opt.db_t_cap;
  os.write(reinterpret_cast<const char*>(&tcap), 4);
  os.write(reinterpret_cast<const char*>(&n), 8);
  os.write(reinterpret_cast<const char*>(impl_->entries.data()),
           static_cast<std::streamsize>(n * sizeof(Impl::Entry)));
}

bool RotationSynthesizer::load_database(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "qamcrdb1", 8) != 0) return false;
  int32_t tcap;
  uint64_t n;
  is.read(reinterpret_cast<char*>(&tcap), 4);
  is.read(reinterpret_cast<char*>(&n), 8);
  if (!is || tcap != impl_->opt.db_t_cap) return false;
  std::vector<Impl::Entry> fresh(n);
  is.read(reinterpret_cast<char*>(fresh.data()),
          static_cast<std::streamsize>(n * sizeof(Impl::Entry)));
  if (!is) return false;
  impl_->build_cliffords();
  impl_->entries = std::move(fresh);
  impl_->build_grid();
  return true;
}

// ---- expansion -----------------------------------------------------------

namespace {

std::complex<double> seq_phase_correction(const std::vector<GateKind>& gates,
                                          GateKind axis, double angle) {
  // exact 2x2 product of the sequence, then the phase aligning it with the
  // ideal rotation: M ~ e^{i a} R(angle); returns e^{-i a}.
  using C = std::complex<double>;
  C m00{1, 0}, m01{0, 0}, m10{0, 0}, m11{1, 0};
  auto lmul = [&](C a00, C a01, C a10, C a11) {
    const C n00 = a00 * m00 + a01 * m10, n01 = a00 * m01 + a01 * m11;
    const C n10 = a10 * m00 + a11 * m10, n11 = a10 * m01 + a11 * m11;
    m00 = n00;
    m01 = n01;
    m10 = n10;
    m11 = n11;
  };
  constexpr double r = 0.70710678118654752440;
  const C i{0, 1};
  for (GateKind g : gates) {
    switch (g) {
      case GateKind::H:
        lmul(r, r, r, -r);
        break;
      case GateKind::S:
        lmul(1, 0, 0, i);
        break;
      case GateKind::Sdg:
        lmul(1, 0, 0, -i);
        break;
      case GateKind::T:
        lmul(1, 0, 0, std::polar(1.0, kPi / 4));
        break;
      case GateKind::Tdg:
        lmul(1, 0, 0, std::polar(1.0, -kPi / 4));
        break;
      case GateKind::X:
        lmul(0, 1, 1, 0);
        break;
      case GateKind::Z:
        lmul(1, 0, 0, -1);
        break;
      default:
        throw std::logic_error("unexpected gate in synthesized sequence");
    }
  }
  C tr;
  if (axis == GateKind::Rz) {
    // tr(M Rz(angle)^dag)
    tr = m00 * std::polar(1.0, angle / 2) + m11 * std::polar(1.0, -angle / 2);
  } else {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    // Ry^dag = [[c, s], [-s, c]]
    tr = m00 * c + m01 * (-s) + m10 * s + m11 * c;
  }
  const double a = std::arg(tr);
  return std::polar(1.0, -a);
}

}  // namespace

Circuit expand_rotations(const Circuit& in, RotationSynthesizer& synth) {
  in.check_balanced();
  Circuit out(in.n_data());
  // recreate the full wire footprint, then release: peak matches the input
  std::vector<uint32_t> ws;
  for (uint32_t w = in.n_data(); w < in.n_total(); ++w)
    ws.push_back(out.alloc_ancilla());
  out.free_ancillas(ws);
  for (const auto& [name, wires] : in.registers())
    out.set_register(name, wires);
  for (const auto& b : in.budget()) out.note_budget(b.label, b.eps);
  out.scale_phase(in.global_phase());
  for (const auto& g : in.gates()) {
    if (!is_rotation(g.kind)) {
      out.add(g);
      continue;
    }
    const RotationResult& r = g.kind == GateKind::Rz
                                  ? synth.synth_rz(g.angle, g.eps)
                                  : synth.synth_ry(g.angle, g.eps);
    for (GateKind k : r.gates) out.add({k, g.q0});
    out.scale_phase(seq_phase_correction(r.gates, g.kind, g.angle));
  }
  return out;
}

}  // namespace qamc
