// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qamc/gadgets.hpp"
#include "qamc/select.hpp"
#include "qamc/sim.hpp"

using namespace qamc;

namespace {

// Reference unitary sum_x |x><x| (x) P_x, identity on index >= S.
oracle::Mat select_reference(uint32_t m, uint32_t l,
                             const std::vector<PauliString>& strings) {
  const size_t M = size_t{1} << m, D = size_t{1} << l, N = M * D;
  oracle::Mat u(N * N, cplx{0, 0});
  for (size_t x = 0; x < M; ++x) {
    const oracle::Mat p = x < strings.size()
                              ? oracle::pauli_matrix(strings[x].str())
                              : oracle::eye(D);
    for (size_t r = 0; r < D; ++r)
      for (size_t cc = 0; cc < D; ++cc)
        u[(x * D + r) * N + (x * D + cc)] = p[r * D + cc];
  }
  return u;
}

PauliString random_string(std::mt19937_64& rng, uint32_t l) {
  PauliString p;
  p.n = l;
  p.phase_quarter = static_cast<uint8_t>(oracle::below(rng, 4));
  for (uint32_t i = 0; i < l; ++i)
    p.letter.push_back(static_cast<uint8_t>(oracle::below(rng, 4)));
  return p;
}

ControlledImpl pauli_impl(const PauliString& p) {
  return ControlledImpl{
      0, [p](Circuit& c, uint32_t ctrl, const std::vector<uint32_t>& data) {
        emit_controlled_pauli(c, p, ctrl, data);
      }};
}

std::vector<PauliString> parse_all(const std::vector<std::string>& ss) {
  std::vector<PauliString> out;
  for (const auto& s : ss) out.push_back(PauliString::parse(s));
  return out;
}

void check_block(const Circuit& c, uint32_t n_block, const oracle::Mat& want,
                 double tol = 1e-10) {
  const auto probe = probe_block(c, n_block);
  REQUIRE(probe.dim == (size_t{1} << n_block));
  CHECK(probe.leakage <= 1e-12);
  CHECK(oracle::max_abs_diff(probe.block, want) <= tol);
}

}  // namespace

TEST_CASE("recursive select with identity payloads is the identity") {
  for (uint32_t m : {1u, 2u}) {
    std::vector<ControlledImpl> impls(
        size_t{1} << m,
        ControlledImpl{0, [](Circuit&, uint32_t, const std::vector<uint32_t>&) {}});
    Circuit c = synth_select_recursive(impls, m, 1);
    check_block(c, m + 1, oracle::eye(size_t{1} << (m + 1)));
  }
}

TEST_CASE("recursive select m=1 realizes diag(X, Z)") {
  const auto strings = parse_all({"X", "Z"});
  std::vector<ControlledImpl> impls{pauli_impl(strings[0]), pauli_impl(strings[1])};
  Circuit c = synth_select_recursive(impls, 1, 1);
  check_block(c, 2, select_reference(1, 1, strings));
}

TEST_CASE("recursive select m=2 matches the block-diagonal reference") {
  std::mt19937_64 rng(0x51f01u);
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<PauliString> strings;
    std::vector<ControlledImpl> impls;
    for (int x = 0; x < 4; ++x) {
      strings.push_back(random_string(rng, 1));
      impls.push_back(pauli_impl(strings.back()));
    }
    Circuit c = synth_select_recursive(impls, 2, 1);
    check_block(c, 3, select_reference(2, 1, strings));
  }
}

TEST_CASE("recursive select rejects a wrong implementation count") {
  std::vector<ControlledImpl> impls(3, pauli_impl(PauliString::parse("X")));
  CHECK_THROWS_AS(synth_select_recursive(impls, 2, 1), SchemaError);
}

TEST_CASE("recursive select Toffoli count is 4(M-2) plus payloads") {
  // Identity payloads leave the walk's Toffolis as the only T sources.
  for (uint32_t m : {1u, 2u, 3u, 4u}) {
    std::vector<ControlledImpl> impls(
        size_t{1} << m,
        ControlledImpl{0, [](Circuit&, uint32_t, const std::vector<uint32_t>&) {}});
    Circuit c = synth_select_recursive(impls, m, 1);
    const auto rep = c.metrics(CostConfig{CostModel::Concrete, 3.0});
    const uint64_t toffolis = m >= 1 ? 4 * ((uint64_t{1} << m) - 2) : 0;
    CHECK(rep.t_count == 7 * toffolis);
  }
}

TEST_CASE("router select equals the recursive variant on (X, Z)") {
  const auto strings = parse_all({"X", "Z"});
  std::vector<ControlledImpl> impls{pauli_impl(strings[0]), pauli_impl(strings[1])};
  Circuit rec = synth_select_recursive(impls, 1, 1);
  Circuit rou = synth_select_router(impls, 1, 1, 64);
  const auto a = probe_block(rec, 2);
  const auto b = probe_block(rou, 2);
  CHECK(oracle::max_abs_diff(a.block, b.block) <= 1e-10);
}

TEST_CASE("router select with identical payloads is I (x) X") {
  const PauliString x = PauliString::parse("X");
  std::vector<ControlledImpl> impls(4, pauli_impl(x));
  Circuit c = synth_select_router(impls, 2, 1, 64);
  oracle::Mat want = oracle::kron(oracle::eye(4), 4, oracle::pauli_matrix("X"), 2);
  check_block(c, 3, want);
}

TEST_CASE("router select is shallower than the recursive variant at m=3") {
  std::mt19937_64 rng(0x51f02u);
  std::vector<PauliString> strings;
  std::vector<ControlledImpl> impls;
  for (int x = 0; x < 8; ++x) {
    strings.push_back(random_string(rng, 1));
    impls.push_back(pauli_impl(strings.back()));
  }
  Circuit rec = synth_select_recursive(impls, 3, 1);
  Circuit rou = synth_select_router(impls, 3, 1, 1u << 10);
  check_block(rou, 4, select_reference(3, 1, strings));
  const CostConfig cm{CostModel::Abstract, 3.0};
  CHECK(rou.metrics(cm).depth < rec.metrics(cm).depth);
}

TEST_CASE("router select enforces the ancilla precondition") {
  std::vector<ControlledImpl> impls(4, pauli_impl(PauliString::parse("X")));
  CHECK_THROWS_AS(synth_select_router(impls, 2, 1, 10), InfeasibleError);
}

TEST_CASE("pauli select: all-identity strings give the identity") {
  const auto strings = parse_all({"II", "II", "II", "II"});
  Circuit c = synth_select_pauli(2, 2, strings, 16);
  check_block(c, 4, oracle::eye(16));
}

TEST_CASE("pauli select m=1 L=1 realizes diag(X, -X)") {
  const auto strings = parse_all({"+X", "-X"});
  for (uint32_t n_anc : {1u, 16u}) {
    Circuit c = synth_select_pauli(1, 1, strings, n_anc);
    check_block(c, 2, select_reference(1, 1, strings));
  }
}

TEST_CASE("pauli select m=2 L=2: budget extremes agree, depths differ") {
  std::mt19937_64 rng(0x51f03u);
  std::vector<PauliString> strings;
  for (int x = 0; x < 4; ++x) strings.push_back(random_string(rng, 2));
  Circuit lo = synth_select_pauli(2, 2, strings, 2);
  Circuit hi = synth_select_pauli(2, 2, strings, 64);
  const auto want = select_reference(2, 2, strings);
  check_block(lo, 4, want);
  check_block(hi, 4, want);
  const CostConfig cm{CostModel::Abstract, 3.0};
  CHECK(lo.metrics(cm).depth != hi.metrics(cm).depth);
}

TEST_CASE("pauli select across all split regimes matches the reference") {
  std::mt19937_64 rng(0x51f04u);
  const uint32_t m = 3, l = 2;
  std::vector<PauliString> strings;
  for (int x = 0; x < 8; ++x) strings.push_back(random_string(rng, l));
  const auto want = select_reference(m, l, strings);
  // Budgets chosen to hit m_a = 0, 1, 2, 3.
  for (uint32_t n_anc : {3u, 8u, 20u, 64u}) {
    Circuit c = synth_select_pauli(m, l, strings, n_anc);
    check_block(c, m + l, want);
  }
}

TEST_CASE("pauli select leaves trailing index values untouched") {
  std::mt19937_64 rng(0x51f05u);
  for (int rep = 0; rep < 3; ++rep) {
    const uint32_t m = 2, l = 1;
    std::vector<PauliString> strings;
    const size_t S = 1 + oracle::below(rng, 3);  // 1..3 of 4 slots
    for (size_t x = 0; x < S; ++x) strings.push_back(random_string(rng, l));
    const auto want = select_reference(m, l, strings);
    for (uint32_t n_anc : {2u, 32u}) {
      Circuit c = synth_select_pauli(m, l, strings, n_anc);
      check_block(c, m + l, want);
    }
  }
}

TEST_CASE("controlled pauli select is identity on control |0>") {
  std::mt19937_64 rng(0x51f06u);
  const uint32_t m = 2, l = 1;
  std::vector<PauliString> strings;
  for (int x = 0; x < 3; ++x) strings.push_back(random_string(rng, l));
  const auto sel = select_reference(m, l, strings);
  // Wire 0 = control (MSB), then index, then data.
  const size_t half = size_t{1} << (m + l);
  oracle::Mat want(4 * half * half, cplx{0, 0});
  for (size_t r = 0; r < half; ++r) {
    want[r * 2 * half + r] = 1.0;
    for (size_t cc = 0; cc < half; ++cc)
      want[(half + r) * 2 * half + (half + cc)] = sel[r * half + cc];
  }
  for (uint32_t n_anc : {3u, 32u}) {
    Circuit c(1 + m + l);
    std::vector<uint32_t> index{1, 2}, data{3};
    emit_select_pauli(c, index, data, strings, n_anc, 0u);
    c.check_balanced();
    check_block(c, 1 + m + l, want);
  }
}

TEST_CASE("pauli select validates shape and budget") {
  const auto strings = parse_all({"XI", "ZI"});
  CHECK_THROWS_AS(synth_select_pauli(1, 1, strings, 8), SchemaError);
  CHECK_THROWS_AS(synth_select_pauli(0, 2, {}, 8), SchemaError);
  CHECK_THROWS_AS(synth_select_pauli(1, 2, parse_all({"XX", "ZZ", "YY"}), 8),
                  SchemaError);
  CHECK_THROWS_AS(synth_select_pauli(3, 2, parse_all({"XX"}), 2),
                  InfeasibleError);
}

TEST_CASE("pauli select m=0 applies the bare string with its phase") {
  const auto strings = parse_all({"-iY"});
  Circuit c = synth_select_pauli(0, 1, strings, 4);
  check_block(c, 1, oracle::pauli_matrix("-iY"));
}

TEST_CASE("select synthesis is deterministic") {
  std::mt19937_64 rng(0x51f07u);
  std::vector<PauliString> strings;
  for (int x = 0; x < 4; ++x) strings.push_back(random_string(rng, 2));
  Circuit a = synth_select_pauli(2, 2, strings, 12);
  Circuit b = synth_select_pauli(2, 2, strings, 12);
  CHECK(a.to_text() == b.to_text());
}
