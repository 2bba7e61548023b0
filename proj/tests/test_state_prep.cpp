// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qamc/rotation.hpp"
#include "qamc/sim.hpp"
#include "qamc/state_prep.hpp"

using namespace qamc;

namespace {

std::vector<cplx> random_state(std::mt19937_64& rng, uint32_t n,
                               bool complex_amps = true) {
  std::vector<cplx> v(size_t{1} << n);
  double norm2 = 0.0;
  for (auto& a : v) {
    a = complex_amps ? cplx{oracle::sym_double(rng), oracle::sym_double(rng)}
                     : cplx{oracle::sym_double(rng), 0.0};
    norm2 += std::norm(a);
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& a : v) a *= s;
  return v;
}

std::vector<SparseAmplitude> random_sparse(std::mt19937_64& rng, uint32_t n,
                                           size_t s) {
  std::vector<SparseAmplitude> e;
  double norm2 = 0.0;
  while (e.size() < s) {
    const uint64_t q = oracle::below(rng, uint64_t{1} << n);
    bool dup = false;
    for (const auto& x : e) dup = dup || x.index == q;
    if (dup) continue;
    e.push_back({q, cplx{oracle::sym_double(rng), oracle::sym_double(rng)}});
    norm2 += std::norm(e.back().amp);
  }
  const double f = 1.0 / std::sqrt(norm2);
  for (auto& x : e) x.amp *= f;
  return e;
}

// Applies the ideal cascade product from the angle table alone: Y layers
// mix sibling pairs, Z layers phase them.  Shares nothing with the emitters.
void apply_exact_ucr(std::vector<cplx>& v, const UcrAngleTable& t) {
  const uint32_t n = t.n;
  const size_t N = size_t{1} << n;
  for (uint32_t j = 1; j <= n; ++j)
    for (size_t x = 0; x < N; ++x) {
      if ((x >> (n - j)) & 1) continue;
      const size_t y = x | (size_t{1} << (n - j));
      const double h = t.ay[j - 1][x >> (n - j + 1)] / 2.0;
      const cplx a = v[x], b = v[y];
      v[x] = std::cos(h) * a - std::sin(h) * b;
      v[y] = std::sin(h) * a + std::cos(h) * b;
    }
  for (uint32_t j = 1; j <= n; ++j)
    for (size_t x = 0; x < N; ++x) {
      const double h = t.az[j - 1][x >> (n - j + 1)] / 2.0;
      v[x] *= std::polar(1.0, ((x >> (n - j)) & 1) ? h : -h);
    }
}

// Runs |x> (bits on the leading wires) and reads the window [lo, hi); mass
// on branches whose wires outside the window moved is reported as leak.
struct Window {
  std::vector<cplx> amps;
  double leak = 0.0;
};

Window window_state(const Circuit& c, uint64_t x, uint32_t n_in, uint32_t lo,
                    uint32_t hi) {
  const SparseState st = run_sparse(c, basis_state(c.n_total(), x, n_in));
  Window w;
  w.amps.assign(size_t{1} << (hi - lo), cplx{0, 0});
  BasisKey ref{};
  for (uint32_t i = 0; i < n_in; ++i)
    ref.set_bit(i, ((x >> (n_in - 1 - i)) & 1) != 0);
  for (const auto& [k, a] : st.amps) {
    bool outside_ok = true;
    for (uint32_t i = 0; i < c.n_total() && outside_ok; ++i)
      if (i < lo || i >= hi) outside_ok = k.bit(i) == ref.bit(i);
    if (!outside_ok) {
      w.leak += std::norm(a);
      continue;
    }
    uint64_t idx = 0;
    for (uint32_t i = lo; i < hi; ++i) idx = (idx << 1) | (k.bit(i) ? 1 : 0);
    w.amps[idx] = a;
  }
  w.leak = std::sqrt(w.leak);
  return w;
}

RotationSynthesizer& shared_synth() {
  static RotationSynthesizer s;
  return s;
}

double abstract_distance(const Circuit& c, const std::vector<cplx>& target) {
  const StateProbe p = probe_state(c);
  REQUIRE(p.leakage <= 1e-12);
  return state_distance(p.state, target);
}

double concrete_distance(const Circuit& c, const std::vector<cplx>& target) {
  const Circuit e = expand_rotations(c, shared_synth());
  const StateProbe p = probe_state(e);
  REQUIRE(p.leakage <= 1e-9);
  return state_distance(p.state, target);
}

}  // namespace

TEST_CASE("ucr angle table matches the pinned examples") {
  std::vector<cplx> zero(8, cplx{0, 0});
  zero[0] = 1.0;
  const UcrAngleTable tz = ucr_angles(AmplitudeVector::make_dense(3, zero));
  CHECK(tz.psi00 == 0.0);
  for (uint32_t j = 1; j <= 3; ++j)
    for (size_t k = 0; k < (size_t{1} << (j - 1)); ++k) {
      CHECK(tz.ay[j - 1][k] == 0.0);
      CHECK(tz.az[j - 1][k] == 0.0);
    }

  const double r2 = 1.0 / std::sqrt(2.0);
  const UcrAngleTable t1 =
      ucr_angles(AmplitudeVector::make_dense(1, {r2, r2}));
  CHECK(t1.ay[0][0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(t1.az[0][0] == 0.0);
}

TEST_CASE("exact ucr product reaches a random 3-qubit target") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 8; ++rep) {
    const auto target = random_state(rng, 3);
    const UcrAngleTable t =
        ucr_angles(AmplitudeVector::make_dense(3, target));
    std::vector<cplx> v(8, cplx{0, 0});
    v[0] = 1.0;
    apply_exact_ucr(v, t);
    for (auto& a : v) a *= std::polar(1.0, t.psi00);
    CHECK(state_distance(v, target) <= 1e-9);
  }
}

TEST_CASE("ucr synthesis prepares random targets within eps") {
  std::mt19937_64 rng(23);
  for (const double eps : {1e-2, 1e-3}) {
    for (const uint32_t n : {1u, 2u, 3u, 4u}) {
      const auto target = random_state(rng, n);
      const Circuit c =
          synth_state_ucr(AmplitudeVector::make_dense(n, target), eps);
      CHECK(abstract_distance(c, target) <= eps);
      CHECK(c.ancilla_peak() <= n);
    }
  }
  // synthesized rotations, same bound
  const auto target = random_state(rng, 3);
  const AmplitudeVector a = AmplitudeVector::make_dense(3, target);
  CHECK(concrete_distance(synth_state_ucr(a, 1e-2), target) <= 1e-2);
  CHECK(concrete_distance(synth_state_ucr(a, 1e-3), target) <= 1e-3);
}

TEST_CASE("ucr trivial target and budget ledger") {
  std::vector<cplx> zero(16, cplx{0, 0});
  zero[0] = 1.0;
  const Circuit c =
      synth_state_ucr(AmplitudeVector::make_dense(4, zero), 1e-2);
  CHECK(c.gates().empty());
  CHECK(c.budget().empty());

  std::mt19937_64 rng(31);
  const double eps = 1e-2;
  const Circuit r =
      synth_state_ucr(AmplitudeVector::make_dense(4, random_state(rng, 4)),
                      eps);
  REQUIRE(r.budget().size() == 4);
  double sum = 0.0;
  for (uint32_t j = 1; j <= 4; ++j) {
    const auto& e = r.budget()[j - 1];
    CHECK(e.label == "ucr layer " + std::to_string(j));
    CHECK(e.eps == eps / std::pow(2.0, 4 - j + 2));
    sum += e.eps;
  }
  CHECK(sum == doctest::Approx(15.0 * eps / 32.0).epsilon(1e-12));
  CHECK(sum <= eps / 2.0);
}

TEST_CASE("state input validation") {
  const double r2 = 1.0 / std::sqrt(2.0);
  const AmplitudeVector ok = AmplitudeVector::make_dense(1, {r2, r2});
  CHECK_THROWS_AS(synth_state_ucr(ok, 1.0), SchemaError);
  CHECK_THROWS_AS(synth_state_ucr(ok, 0.0), SchemaError);
  CHECK_THROWS_AS(synth_state_ucr(ok, -0.5), SchemaError);
  CHECK_THROWS_AS(AmplitudeVector::make_dense(1, {1.0, 1.0}), SchemaError);
  CHECK_THROWS_AS(AmplitudeVector::make_dense(2, {r2, r2}), SchemaError);
  CHECK_THROWS_AS(AmplitudeVector::make_sparse(2, {{4, 1.0}}), SchemaError);
  CHECK_THROWS_AS(AmplitudeVector::make_sparse(2, {{1, r2}, {1, r2}}),
                  SchemaError);
  // form mismatches
  const AmplitudeVector sp = AmplitudeVector::make_sparse(2, {{2, 1.0}});
  CHECK_THROWS_AS(synth_state_ucr(sp, 1e-2), SchemaError);
  CHECK_THROWS_AS(synth_state_tree(sp, 1e-2, false), SchemaError);
  CHECK_THROWS_AS(synth_state_tradeoff(sp, 1e-2, 8), SchemaError);
  CHECK_THROWS_AS(synth_sparse_state(ok, 1e-2, 4), SchemaError);
}

TEST_CASE("tree amplitude table conserves mass and pins dead subtrees") {
  std::mt19937_64 rng(41);
  const auto target = random_state(rng, 4);
  const TreeAmplitudeTable t =
      tree_amplitudes(AmplitudeVector::make_dense(4, target));
  for (uint32_t L = 0; L <= 4; ++L) {
    double mass = 0.0;
    for (const cplx& a : t.alpha[L]) mass += std::norm(a);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (size_t k = 0; k < 16; ++k)
    CHECK(std::abs(t.alpha[4][k] - target[k]) <= 1e-12);

  const double r2 = 1.0 / std::sqrt(2.0);
  const TreeAmplitudeTable d =
      tree_amplitudes(AmplitudeVector::make_dense(2, {r2, r2, 0.0, 0.0}));
  CHECK(d.theta[1][1] == 0.0);
  CHECK(d.phi[1][1] == 0.0);
  CHECK(d.theta[1][0] ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
}

TEST_CASE("tree synthesis prepares targets in all control modes") {
  const AmplitudeVector pinned =
      AmplitudeVector::make_dense(2, {0.6, 0.0, 0.0, 0.8});
  const Circuit cp = synth_state_tree(pinned, 1e-3, false);
  CHECK(abstract_distance(cp, pinned.dense) <= 1e-3);
  CHECK(concrete_distance(cp, pinned.dense) <= 1e-3);

  std::mt19937_64 rng(43);
  for (const uint32_t n : {1u, 3u, 4u}) {
    const auto target = random_state(rng, n);
    const Circuit c =
        synth_state_tree(AmplitudeVector::make_dense(n, target), 1e-2, false);
    CHECK(abstract_distance(c, target) <= 1e-2);
  }

  // controlled: |1> on the root prepares, |0> leaves the data at |0^n>
  const auto target = random_state(rng, 3);
  const Circuit cc =
      synth_state_tree(AmplitudeVector::make_dense(3, target), 1e-3, true);
  const Window on = window_state(cc, 1, 1, 1, 4);
  REQUIRE(on.leak <= 1e-12);
  CHECK(state_distance(on.amps, target) <= 1e-3);
  const Window off = window_state(cc, 0, 1, 1, 4);
  REQUIRE(off.leak <= 1e-12);
  std::vector<cplx> zero3(8, cplx{0, 0});
  zero3[0] = 1.0;
  CHECK(state_distance_up_to_phase(off.amps, zero3) <= 1e-9);

  // the off branch stays exact even after rotation synthesis
  const Circuit ce = expand_rotations(cc, shared_synth());
  const Window eoff = window_state(ce, 0, 1, 1, 4);
  REQUIRE(eoff.leak <= 1e-9);
  CHECK(state_distance_up_to_phase(eoff.amps, zero3) <= 1e-9);
  const Window eon = window_state(ce, 1, 1, 1, 4);
  CHECK(state_distance(eon.amps, target) <= 1e-3);

  // trivial controlled target
  std::vector<cplx> zero2(4, cplx{0, 0});
  zero2[0] = 1.0;
  const Circuit ct =
      synth_state_tree(AmplitudeVector::make_dense(2, zero2), 1e-2, true);
  const Window tw = window_state(ct, 1, 1, 1, 3);
  CHECK(tw.leak <= 1e-12);
  CHECK(state_distance(tw.amps, zero2) <= 1e-9);
}

TEST_CASE("tree budget rule sums below eps") {
  std::mt19937_64 rng(47);
  const double eps = 1e-2;
  const Circuit c = synth_state_tree(
      AmplitudeVector::make_dense(4, random_state(rng, 4)), eps, false);
  REQUIRE(c.budget().size() == 4);
  double sum = 0.0;
  const double K = 6.0 / (std::numbers::pi * std::numbers::pi);
  for (uint32_t L = 1; L <= 4; ++L) {
    const auto& e = c.budget()[L - 1];
    CHECK(e.label == "tree layer " + std::to_string(L));
    CHECK(e.eps ==
          doctest::Approx(K * eps / ((4 - L + 1.0) * (4 - L + 1.0)))
              .epsilon(1e-12));
    sum += e.eps;
  }
  CHECK(sum <= eps);
}

TEST_CASE("tree wins the depth comparison from n = 6") {
  std::mt19937_64 rng(53);
  const auto target = random_state(rng, 6);
  const AmplitudeVector a = AmplitudeVector::make_dense(6, target);
  const uint64_t dt = synth_state_tree(a, 1e-3, false).metrics({}).depth;
  const uint64_t du = synth_state_ucr(a, 1e-3).metrics({}).depth;
  CHECK(dt <= du);
}

TEST_CASE("controlled ucr emission conditions every rotation") {
  std::mt19937_64 rng(59);
  const auto target = random_state(rng, 3);
  Circuit c(4);
  const double def = emit_state_ucr(c, {1, 2, 3}, target, 1e-3, 0u);
  c.scale_phase(std::polar(1.0, def));
  CHECK(c.gates().size() > 0);

  // control clear: nothing happens beyond the folded global scalar
  const Window off = window_state(c, 0, 1, 1, 4);
  CHECK(off.leak <= 1e-12);
  std::vector<cplx> zero3(8, cplx{0, 0});
  zero3[0] = 1.0;
  CHECK(state_distance_up_to_phase(off.amps, zero3) <= 1e-12);

  // control set: the data register carries the target
  const Window on = window_state(c, 1, 1, 1, 4);
  CHECK(on.leak <= 1e-12);
  CHECK(state_distance(on.amps, target) <= 1e-3);
}

TEST_CASE("tradeoff extremes reduce to the pure paths") {
  std::mt19937_64 rng(61);
  const auto target = random_state(rng, 4);
  const AmplitudeVector a = AmplitudeVector::make_dense(4, target);
  const double eps = 1e-2;
  CHECK(synth_state_tradeoff(a, eps, 4).to_text() ==
        synth_state_ucr(a, eps).to_text());
  CHECK(synth_state_tradeoff(a, eps, 64).to_text() ==
        synth_state_tree(a, eps, false).to_text());
  CHECK(abstract_distance(synth_state_tradeoff(a, eps, 4), target) <= eps);
  CHECK(abstract_distance(synth_state_tradeoff(a, eps, 64), target) <= eps);
}

TEST_CASE("tradeoff obeys budget, accuracy, and monotone depth") {
  std::mt19937_64 rng(67);
  const auto target = random_state(rng, 5);
  const AmplitudeVector a = AmplitudeVector::make_dense(5, target);
  const double eps = 1e-2;

  CHECK_THROWS_AS(synth_state_tradeoff(a, eps, 4), InfeasibleError);

  const Circuit mid = synth_state_tradeoff(a, eps, 16);
  CHECK(mid.ancilla_peak() <= 16);
  CHECK(abstract_distance(mid, target) <= eps);
  const uint64_t d_mid = mid.metrics({}).depth;
  const uint64_t d_ucr = synth_state_ucr(a, eps).metrics({}).depth;
  const uint64_t d_tree = synth_state_tree(a, eps, false).metrics({}).depth;
  CHECK(d_tree < d_mid);
  CHECK(d_mid < d_ucr);

  uint64_t prev = UINT64_MAX;
  for (const uint32_t anc : {5u, 6u, 8u, 10u, 12u, 16u, 22u, 30u, 40u, 62u,
                             64u, 80u}) {
    const Circuit c = synth_state_tradeoff(a, eps, anc);
    CHECK(c.ancilla_peak() <= anc);
    const uint64_t d = c.metrics({}).depth;
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("tradeoff stays accurate with synthesized rotations") {
  std::mt19937_64 rng(71);
  const auto target = random_state(rng, 4);
  const AmplitudeVector a = AmplitudeVector::make_dense(4, target);
  const Circuit c = synth_state_tradeoff(a, 1e-2, 16);
  CHECK(c.ancilla_peak() <= 16);
  CHECK(abstract_distance(c, target) <= 1e-2);
  CHECK(concrete_distance(c, target) <= 1e-2);
}

TEST_CASE("sparse single-entry targets are exact X writes") {
  const AmplitudeVector a =
      AmplitudeVector::make_sparse(3, {{5, cplx{0.0, 1.0}}});
  const Circuit c = synth_sparse_state(a, 1e-3, 0);
  REQUIRE(c.gates().size() == 2);
  for (const auto& g : c.gates()) CHECK(g.kind == GateKind::X);
  std::vector<cplx> target(8, cplx{0, 0});
  target[5] = cplx{0.0, 1.0};
  CHECK(abstract_distance(c, target) <= 1e-12);
}

TEST_CASE("sparse targets hit their states in both budget regimes") {
  const double r2 = 1.0 / std::sqrt(2.0);
  const AmplitudeVector two =
      AmplitudeVector::make_sparse(3, {{0, r2}, {5, r2}});
  std::vector<cplx> t2(8, cplx{0, 0});
  t2[0] = r2;
  t2[5] = r2;
  const Circuit c2 = synth_sparse_state(two, 1e-3, 8);
  CHECK(abstract_distance(c2, t2) <= 1e-3);
  CHECK(concrete_distance(c2, t2) <= 1e-3);

  std::mt19937_64 rng(73);
  for (const uint32_t n : {4u, 6u, 8u}) {
    const auto entries = random_sparse(rng, n, 4);
    const AmplitudeVector a = AmplitudeVector::make_sparse(n, entries);
    std::vector<cplx> target(size_t{1} << n, cplx{0, 0});
    for (const auto& e : entries) target[e.index] = e.amp;
    for (const uint32_t anc : {0u, 64u}) {
      const Circuit c = synth_sparse_state(a, 1e-2, anc);
      CHECK(abstract_distance(c, target) <= 1e-2);
    }
  }
}

TEST_CASE("sparse cost is independent of the dimension at fixed s") {
  // same four entries and amplitudes at growing n: the weighted count must
  // be an affine function of n (never of 2^n)
  std::vector<SparseAmplitude> base = {{0, 0.5}, {1, 0.5}, {2, 0.5}, {3, 0.5}};
  std::vector<uint64_t> counts;
  for (const uint32_t n : {6u, 8u, 10u}) {
    const AmplitudeVector a = AmplitudeVector::make_sparse(n, base);
    const Circuit c = synth_sparse_state(a, 1e-3, 0);
    counts.push_back(c.metrics({}).count);
  }
  CHECK(counts[1] - counts[0] == counts[2] - counts[1]);
  CHECK(counts[1] > counts[0]);  // linear growth, not constant
}

TEST_CASE("sparse validation rejects duplicates and dense input") {
  AmplitudeVector bad;
  bad.n = 3;
  bad.sparse_form = true;
  const double r2 = 1.0 / std::sqrt(2.0);
  bad.sparse = {{5, r2}, {5, r2}};
  CHECK_THROWS_AS(synth_sparse_state(bad, 1e-3, 8), SchemaError);
}

TEST_CASE("ucr t-count matches the closed-form ledger at unit cost") {
  std::mt19937_64 rng(79);
  const uint32_t n = 5;
  const double eps = 1e-2;
  const auto target = random_state(rng, n);
  const AmplitudeVector a = AmplitudeVector::make_dense(n, target);
  const UcrAngleTable t = ucr_angles(a);
  for (uint32_t j = 1; j <= n; ++j)
    for (size_t k = 0; k < (size_t{1} << (j - 1)); ++k) {
      REQUIRE(t.ay[j - 1][k] != 0.0);
      REQUIRE(t.az[j - 1][k] != 0.0);
    }
  // replay the documented Gray-code ladder walk arithmetically: toffoli
  // rebuild depths from the flipped selector, two half-angle rotations per
  // cell, 7 T per toffoli
  const auto layer_t = [&](uint32_t j) -> uint64_t {
    const double ej = ucr_layer_eps(eps, n, j);
    if (j == 1) return rotation_t_weight(ej, 1.0);
    const uint32_t nl = j - 1;
    uint64_t tof = 0, rot = 0;
    uint32_t built = 0;
    std::vector<bool> x_on(nl, false);
    for (uint64_t t = 0; t < (uint64_t{1} << nl); ++t) {
      const uint64_t k = t ^ (t >> 1);
      for (uint32_t s = 0; s < nl; ++s) {
        const bool need = ((k >> (nl - 1 - s)) & 1) == 0;
        if (x_on[s] == need) continue;
        const uint32_t fl = s == 0 ? 0 : s - 1;
        if (built > fl) {
          tof += built - fl;
          built = fl;
        }
        x_on[s] = need;
      }
      if (nl >= 2 && built + 1 < nl) {
        tof += nl - 1 - built;
        built = nl - 1;
      }
      rot += 2 * rotation_t_weight(ej / 2.0, 1.0);
    }
    tof += built;
    return 7 * tof + rot;
  };
  uint64_t expect_axis = 0;
  for (uint32_t j = 1; j <= n; ++j) expect_axis += layer_t(j);
  const Circuit c = synth_state_ucr(a, eps);
  const ResourceReport m = c.metrics({CostModel::Abstract, 1.0});
  CHECK(m.t_count == 2 * expect_axis);
}

TEST_CASE("ucr count scales linearly in the dimension") {
  std::mt19937_64 rng(83);
  std::vector<double> xs, ys;
  for (uint32_t n = 6; n <= 12; ++n) {
    const auto target = random_state(rng, n);
    const Circuit c =
        synth_state_ucr(AmplitudeVector::make_dense(n, target), 1e-3);
    xs.push_back(n * std::log(2.0));
    ys.push_back(std::log(double(c.metrics({}).count)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double m = double(xs.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope >= 0.85);
  CHECK(slope <= 1.15);
}

TEST_CASE("state synthesis is deterministic") {
  std::mt19937_64 rng(89);
  const auto t4 = random_state(rng, 4);
  const AmplitudeVector a = AmplitudeVector::make_dense(4, t4);
  CHECK(synth_state_ucr(a, 1e-2).to_text() ==
        synth_state_ucr(a, 1e-2).to_text());
  CHECK(synth_state_tree(a, 1e-2, true).to_text() ==
        synth_state_tree(a, 1e-2, true).to_text());
  CHECK(synth_state_tradeoff(a, 1e-2, 16).to_text() ==
        synth_state_tradeoff(a, 1e-2, 16).to_text());
  const auto sp = random_sparse(rng, 5, 3);
  const AmplitudeVector s = AmplitudeVector::make_sparse(5, sp);
  CHECK(synth_sparse_state(s, 1e-2, 8).to_text() ==
        synth_sparse_state(s, 1e-2, 8).to_text());
}
