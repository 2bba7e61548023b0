// SPDX-License-Identifier: MIT

#include "qamc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qamc {

namespace {

cplx random_amp(Rand& r) {
  return {r.sym(), r.sym()};
}

std::vector<uint64_t> distinct_indices(Rand& r, uint64_t space, uint32_t k) {
  std::vector<uint64_t> out;
  while (out.size() < k) {
    const uint64_t x = r.below(space);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

}  // namespace

AmplitudeVector random_dense_state(Rand& r, uint32_t n) {
  std::vector<cplx> amps(uint64_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = random_amp(r);
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (auto& a : amps) a /= norm;
  return AmplitudeVector::make_dense(n, std::move(amps));
}

AmplitudeVector random_sparse_state(Rand& r, uint32_t n, uint32_t s) {
  const std::vector<uint64_t> idx = distinct_indices(r, uint64_t{1} << n, s);
  std::vector<SparseAmplitude> entries;
  double norm = 0.0;
  for (const uint64_t x : idx) {
    const cplx a = random_amp(r);
    entries.push_back({x, a});
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (auto& e : entries) e.amp /= norm;
  return AmplitudeVector::make_sparse(n, std::move(entries));
}

std::vector<PauliString> random_pauli_strings(Rand& r, uint32_t l,
                                              uint32_t count) {
  std::vector<PauliString> out(count);
  for (auto& p : out) {
    p.n = l;
    p.letter.resize(l);
    for (auto& c : p.letter) c = static_cast<uint8_t>(r.below(4));
    p.phase_quarter = static_cast<uint8_t>(2 * r.below(2));  // +1 or -1
  }
  return out;
}

std::vector<SbmEntry> random_sbm_entries(Rand& r, uint32_t n,
                                         uint32_t word_bits, uint32_t s) {
  const std::vector<uint64_t> idx = distinct_indices(r, uint64_t{1} << n, s);
  std::vector<SbmEntry> out;
  for (const uint64_t q : idx)
    out.push_back({q, 1 + r.below((uint64_t{1} << word_bits) - 1)});
  return out;
}

IntMatrix random_int_matrix(Rand& r, uint32_t n, uint32_t d, uint32_t s) {
  const uint64_t size = uint64_t{1} << n;
  IntMatrix a;
  a.n = n;
  a.d = d;
  a.s = s;
  std::vector<uint64_t> perm(size);
  for (uint32_t round = 0; round < s; ++round) {
    std::iota(perm.begin(), perm.end(), 0);
    for (uint64_t i = size - 1; i > 0; --i)
      std::swap(perm[i], perm[r.below(i + 1)]);
    for (uint64_t row = 0; row < size; ++row) {
      const uint64_t col = perm[row];
      const uint64_t val = 1 + r.below((uint64_t{1} << d) - 1);
      bool dup = false;
      for (const auto& e : a.entries)
        dup = dup || (e.row == row && e.col == col);
      if (!dup) a.entries.push_back({row, col, val});
    }
  }
  a.normalize();
  return a;
}

LcuSpec random_lcu(Rand& r, uint32_t n, uint32_t p) {
  LcuSpec spec;
  spec.n = n;
  while (spec.terms.size() < p) {
    PauliString s = random_pauli_strings(r, n, 1)[0];
    s.phase_quarter = 0;
    if (s.is_identity_letterwise()) continue;
    spec.terms.push_back({cplx{0.1 + 0.9 * r.unit(), 0.0}, std::move(s)});
  }
  return spec;
}

SparseMatrixCOO random_sparse_matrix(Rand& r, uint32_t n, uint32_t s) {
  const uint64_t size = uint64_t{1} << n;
  SparseMatrixCOO a;
  a.n = n;
  for (uint64_t row = 0; row < size; ++row)
    for (const uint64_t col : distinct_indices(r, size, s))
      a.entries.push_back({row, col, random_amp(r)});
  return a;
}

}  // namespace qamc
