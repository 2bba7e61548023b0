// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qamc/rotation.hpp"

using namespace qamc;
using oracle::Mat;

namespace {

constexpr double kPi = std::numbers::pi;

RotationSynthesizer& shared_synth() {
  static RotationSynthesizer s;
  return s;
}

// Exact 2x2 product of a single-wire gate sequence, circuit order.
Mat product_of(const std::vector<GateKind>& gates) {
  Mat m = oracle::eye(2);
  for (GateKind k : gates) m = oracle::matmul(oracle::gate2x2({k, 0}), m, 2);
  return m;
}

// Projective operator distance between a (possibly phased) 2x2 unitary and
// an SU(2) reference: normalize by sqrt(det), then sqrt(2 - |tr(M^dag R)|).
double proj_dist_2x2(const Mat& m, const Mat& r) {
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const cplx root = std::sqrt(det);
  cplx tr{0, 0};
  tr += std::conj(m[0] / root) * r[0] + std::conj(m[2] / root) * r[2];
  tr += std::conj(m[1] / root) * r[1] + std::conj(m[3] / root) * r[3];
  return std::sqrt(std::max(0.0, 2.0 - std::abs(tr)));
}

Mat rz_mat(double a) { return oracle::gate2x2({GateKind::Rz, 0, 0, a, 1}); }
Mat ry_mat(double a) { return oracle::gate2x2({GateKind::Ry, 0, 0, a, 1}); }

uint64_t t_in(const std::vector<GateKind>& g) {
  uint64_t n = 0;
  for (auto k : g)
    if (k == GateKind::T || k == GateKind::Tdg) ++n;
  return n;
}

}  // namespace

TEST_CASE("database size matches the closed-form enumeration count") {
  // 24 Cliffords, then per T-count t >= 1: 3*2^(t-1) words times 24.
  CHECK(shared_synth().database_size() == 24u + 24u * 3u * ((1u << 12) - 1u));
}

TEST_CASE("pi/4 synthesizes to the bare T gate") {
  const auto& r = shared_synth().synth_rz(kPi / 4, 1e-8);
  REQUIRE(r.gates.size() == 1);
  CHECK(r.gates[0] == GateKind::T);
  CHECK(r.t_count == 1);
  CHECK(r.achieved <= 1e-12);
}

TEST_CASE("pi/2 synthesizes to the bare S gate at zero T cost") {
  const auto& r = shared_synth().synth_rz(kPi / 2, 1e-8);
  REQUIRE(r.gates.size() == 1);
  CHECK(r.gates[0] == GateKind::S);
  CHECK(r.t_count == 0);
  CHECK(r.achieved <= 1e-12);
}

TEST_CASE("zero angle synthesizes to the empty sequence") {
  const auto& r = shared_synth().synth_rz(0.0, 1e-8);
  CHECK(r.gates.empty());
  CHECK(r.t_count == 0);
}

TEST_CASE("random angles meet the requested accuracy, measured independently") {
  std::mt19937_64 rng(20260818);
  const double epses[] = {1e-1, 1e-2, 1e-3};
  for (int i = 0; i < 8; ++i) {
    const double angle = oracle::sym_double(rng) * kPi;
    for (double eps : epses) {
      const auto& r = shared_synth().synth_rz(angle, eps);
      const double d = proj_dist_2x2(product_of(r.gates), rz_mat(angle));
      CAPTURE(angle);
      CAPTURE(eps);
      CHECK(d <= eps + 1e-12);
      CHECK(std::abs(d - r.achieved) <= 1e-9);
      CHECK(r.t_count == t_in(r.gates));
    }
  }
  // a few fine-accuracy requests exercising the refinement ladder
  for (double angle : {0.8137, -2.41, 1.977}) {
    const auto& r = shared_synth().synth_rz(angle, 1e-5);
    const double d = proj_dist_2x2(product_of(r.gates), rz_mat(angle));
    CHECK(d <= 1e-5 + 1e-12);
  }
}

TEST_CASE("T-count is nonincreasing as the accuracy loosens") {
  const double epses[] = {0.3, 0.1, 0.03, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  uint64_t prev = 0;
  for (double eps : epses) {
    const auto& r = shared_synth().synth_rz(0.61, eps);
    CHECK(r.achieved <= eps);
    CHECK(r.t_count >= prev);
    prev = r.t_count;
  }
}

TEST_CASE("negative angles expand to exactly the inverse sequence") {
  for (double angle : {0.61, 1.9, kPi / 4}) {
    const auto& pos = shared_synth().synth_rz(angle, 1e-4);
    const auto& neg = shared_synth().synth_rz(-angle, 1e-4);
    REQUIRE(pos.gates.size() == neg.gates.size());
    const auto inv = [](GateKind k) {
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
    };
    for (size_t i = 0; i < pos.gates.size(); ++i)
      CHECK(neg.gates[i] == inv(pos.gates[pos.gates.size() - 1 - i]));
    CHECK(neg.t_count == pos.t_count);
  }
  // same property through the Ry wrapper
  const auto& rp = shared_synth().synth_ry(0.77, 1e-3);
  const auto& rn = shared_synth().synth_ry(-0.77, 1e-3);
  Mat prod = oracle::matmul(product_of(rn.gates), product_of(rp.gates), 2);
  const cplx det = prod[0] * prod[3] - prod[1] * prod[2];
  for (auto& x : prod) x /= std::sqrt(det);
  if (std::real(prod[0]) < 0)
    for (auto& x : prod) x = -x;
  CHECK(oracle::max_abs_diff(prod, oracle::eye(2)) <= 1e-12);
}

TEST_CASE("Ry synthesis approximates the Ry matrix") {
  for (double angle : {0.7, -1.3, 2.9}) {
    const auto& r = shared_synth().synth_ry(angle, 1e-4);
    const double d = proj_dist_2x2(product_of(r.gates), ry_mat(angle));
    CHECK(d <= 1e-4 + 1e-12);
    CHECK(r.t_count == t_in(r.gates));
  }
}

TEST_CASE("(HS)^3 equals e^{i pi/4} times the identity") {
  Mat m = product_of({GateKind::S, GateKind::H, GateKind::S, GateKind::H,
                      GateKind::S, GateKind::H});
  Mat want = oracle::eye(2);
  for (auto& x : want) x *= std::polar(1.0, kPi / 4);
  CHECK(oracle::max_abs_diff(m, want) <= 1e-12);
}

TEST_CASE("phase-exact synthesis of pi/2 matches Rz without phase freedom") {
  auto r = shared_synth().synth_rz_phase_exact(kPi / 2, 1e-10);
  CHECK(r.achieved <= 1e-12);
  CHECK(oracle::max_abs_diff(product_of(r.gates), rz_mat(kPi / 2)) <= 1e-12);
}

TEST_CASE("phase-exact synthesis of pi/4 is unreachable and reports the gap") {
  CHECK_THROWS_AS(shared_synth().synth_rz_phase_exact(kPi / 4, 1e-6),
                  CapError);
}

TEST_CASE("expansion replaces rotations and stays phase-faithful") {
  Circuit c(2);
  c.h(0);
  c.rz(0.3, 1e-3, 1);
  c.cnot(0, 1);
  c.ry(-0.45, 1e-3, 0);
  c.scale_phase(std::polar(1.0, 0.37));
  Circuit e = expand_rotations(c, shared_synth());
  for (const auto& g : e.gates()) CHECK(!is_rotation(g.kind));
  const Mat want = oracle::circuit_unitary(c);
  const Mat got = oracle::circuit_unitary(e);
  CHECK(oracle::max_abs_diff(want, got) <= 2.5e-3);
}

TEST_CASE("opposite rotations cancel exactly after expansion") {
  Circuit c(1);
  c.rz(0.9, 1e-2, 0);
  c.rz(-0.9, 1e-2, 0);
  c.ry(1.7, 1e-2, 0);
  c.ry(-1.7, 1e-2, 0);
  Circuit e = expand_rotations(c, shared_synth());
  CHECK(oracle::max_abs_diff(oracle::circuit_unitary(e), oracle::eye(2)) <=
        1e-12);
}

TEST_CASE("expansion preserves registers, budgets, and wire footprint") {
  Circuit c(1);
  const uint32_t a = c.alloc_ancilla();
  c.rz(0.3, 1e-2, a);
  c.free_ancilla(a);
  c.set_register("flag", {a});
  c.note_budget("rotation", 1e-2);
  Circuit e = expand_rotations(c, shared_synth());
  CHECK(e.n_total() == c.n_total());
  CHECK(e.ancilla_peak() == 1);
  CHECK(e.registers().at("flag") == std::vector<uint32_t>{a});
  REQUIRE(e.budget().size() == 1);
  CHECK(e.budget()[0].label == "rotation");
  e.check_balanced();
}

TEST_CASE("database round-trips through save and load") {
  const char* path = "rotdb_roundtrip.bin";
  shared_synth().save_database(path);
  RotationSynthesizer fresh;
  REQUIRE(fresh.load_database(path));
  CHECK(fresh.database_size() == shared_synth().database_size());
  const auto& a = fresh.synth_rz(0.61, 1e-3);
  const auto& b = shared_synth().synth_rz(0.61, 1e-3);
  CHECK(a.gates == b.gates);
  CHECK(a.t_count == b.t_count);

  RotationSynthesizer other({.db_t_cap = 4});
  CHECK(!other.load_database(path));  // cap mismatch is rejected
  CHECK(!fresh.load_database("no_such_file.bin"));
  std::remove(path);
}
