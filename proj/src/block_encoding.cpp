// SPDX-License-Identifier: MIT

#include "qamc/block_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qamc/gadgets.hpp"
#include "qamc/state_prep.hpp"

namespace qamc {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw SchemaError("accuracy must lie in (0, 1)");
}

// Splits a coefficient into magnitude, a quarter-turn count folded into the
// Pauli prefactor, and a residual phase in (-pi/4, pi/4].
struct FoldedCoeff {
  double mag = 0.0;
  uint8_t quarters = 0;
  double residual = 0.0;
};

FoldedCoeff fold_coeff(cplx c) {
  FoldedCoeff f;
  f.mag = std::abs(c);
  if (f.mag == 0.0) return f;
  const double g = std::arg(c);
  const long q = std::lround(g / (std::numbers::pi / 2));
  f.quarters = static_cast<uint8_t>(((q % 4) + 4) % 4);
  f.residual = g - static_cast<double>(q) * (std::numbers::pi / 2);
  if (std::abs(f.residual) <= 1e-12) f.residual = 0.0;
  return f;
}

uint32_t index_width(size_t p) {
  uint32_t m = 0;
  while ((size_t{1} << m) < p) ++m;
  return m;
}

// Coefficient state sum_p sqrt(a_p / alpha) |p> on 2^m slots.
std::vector<cplx> coeff_state(const std::vector<double>& mags, double alpha,
                              uint32_t m) {
  std::vector<cplx> amps(size_t{1} << m, cplx{0.0, 0.0});
  for (size_t p = 0; p < mags.size(); ++p)
    amps[p] = std::sqrt(mags[p] / alpha);
  return amps;
}

std::vector<uint32_t> iota_wires(uint32_t n, uint32_t first) {
  std::vector<uint32_t> w(n);
  for (uint32_t i = 0; i < n; ++i) w[i] = first + i;
  return w;
}

BlockEncodingReport make_report(const Circuit& c, uint32_t n_block,
                                double alpha, double eps) {
  BlockEncodingReport r;
  r.alpha = alpha;
  r.n_anc = c.n_total() - n_block;
  r.eps_requested = eps;
  r.resource = c.metrics({});
  return r;
}

}  // namespace

void LcuSpec::validate() const {
  if (n == 0) throw SchemaError("lcu spec needs at least one qubit");
  if (terms.empty()) throw SchemaError("lcu spec needs at least one term");
  for (const auto& t : terms)
    if (t.pauli.n != n || t.pauli.letter.size() != n)
      throw SchemaError("lcu term width does not match the qubit count");
  if (!(alpha() > 0.0)) throw SchemaError("lcu coefficients are all zero");
}

double LcuSpec::alpha() const {
  double a = 0.0;
  for (const auto& t : terms) a += std::abs(t.coeff);
  return a;
}

std::vector<cplx> LcuSpec::matrix() const {
  if (n > 10) throw SchemaError("dense lcu matrix capped at 10 qubits");
  const size_t dim = size_t{1} << n;
  std::vector<cplx> h(dim * dim, cplx{0.0, 0.0});
  for (const auto& t : terms) {
    const std::vector<cplx> p = t.pauli.matrix();
    for (size_t i = 0; i < dim * dim; ++i) h[i] += t.coeff * p[i];
  }
  return h;
}

void GeneralLcuSpec::validate() const {
  if (n == 0) throw SchemaError("lcu spec needs at least one qubit");
  if (coeffs.size() != payloads.size())
    throw SchemaError("coefficient and payload counts differ");
  if (coeffs.empty()) throw SchemaError("lcu spec needs at least one term");
  for (double a : coeffs)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw SchemaError("general lcu coefficients must be real nonnegative");
  if (!(alpha() > 0.0)) throw SchemaError("lcu coefficients are all zero");
}

double GeneralLcuSpec::alpha() const {
  double a = 0.0;
  for (double x : coeffs) a += x;
  return a;
}

std::pair<Circuit, BlockEncodingReport> synth_lcu_be(const GeneralLcuSpec& spec,
                                                     double eps,
                                                     uint32_t n_anc) {
  spec.validate();
  check_eps(eps);
  const size_t P = spec.coeffs.size();
  const uint32_t m = index_width(P);
  if (n_anc < std::max(m, uint32_t{1}))
    throw InfeasibleError("ancilla budget below the index walk requirement");
  const double alpha = spec.alpha();
  const uint32_t n_data = spec.n + m;
  const std::vector<uint32_t> data = iota_wires(spec.n, 0);
  const std::vector<uint32_t> index = iota_wires(m, spec.n);

  Circuit prep(n_data);
  const double def =
      emit_state_ucr(prep, index, coeff_state(spec.coeffs, alpha, m), eps / 3.0,
                     {});
  prep.scale_phase(std::polar(1.0, def));

  Circuit sel(n_data);
  emit_select_recursive(sel, index, 0, P, [&](Circuit& c, uint64_t x,
                                              uint32_t flag) {
    if (spec.coeffs[x] == 0.0) return;
    spec.payloads[x].emit(c, flag, data);
  });

  Circuit u = prep.then(sel).then(prep.inverse());
  u.set_register("block", data);
  if (m > 0) u.set_register("index", index);
  u.note_budget("lcu prep", eps / 3.0);
  u.note_budget("lcu unprep", eps / 3.0);
  BlockEncodingReport r = make_report(u, spec.n, alpha, eps);
  return {std::move(u), std::move(r)};
}

std::pair<Circuit, BlockEncodingReport> synth_pauli_lcu_be(const LcuSpec& spec,
                                                           double eps,
                                                           uint32_t n_anc) {
  spec.validate();
  check_eps(eps);
  const size_t P = spec.terms.size();
  const uint32_t m = index_width(P);
  if (n_anc < m)
    throw InfeasibleError("ancilla budget below the index walk requirement");
  const double alpha = spec.alpha();
  const uint32_t n_data = spec.n + m;
  const std::vector<uint32_t> data = iota_wires(spec.n, 0);
  const std::vector<uint32_t> index = iota_wires(m, spec.n);

  std::vector<double> mags(P);
  std::vector<PauliString> folded(P);
  std::vector<double> residual(P, 0.0);
  size_t n_residual = 0;
  for (size_t p = 0; p < P; ++p) {
    const FoldedCoeff f = fold_coeff(spec.terms[p].coeff);
    mags[p] = f.mag;
    folded[p] = spec.terms[p].pauli;
    folded[p].phase_quarter =
        static_cast<uint8_t>((folded[p].phase_quarter + f.quarters) % 4);
    residual[p] = f.residual;
    if (f.mag != 0.0 && f.residual != 0.0) ++n_residual;
  }

  Circuit prep(n_data);
  const double def =
      emit_state_ucr(prep, index, coeff_state(mags, alpha, m), eps / 3.0, {});
  prep.scale_phase(std::polar(1.0, def));

  Circuit sel(n_data);
  if (P == 1) {
    emit_pauli(sel, folded[0], data);
    if (residual[0] != 0.0) sel.scale_phase(std::polar(1.0, residual[0]));
  } else if (n_residual == 0) {
    emit_select_pauli(sel, index, data, folded, n_anc, {});
  } else {
    // branch phases that are not quarter-turns ride on the leaf flag: the
    // half-angle under-rotation of every other branch is repaid globally
    const double eps_rz = eps / (3.0 * static_cast<double>(n_residual));
    emit_select_recursive(sel, index, 0, P, [&](Circuit& c, uint64_t x,
                                                uint32_t flag) {
      if (mags[x] == 0.0) return;
      emit_controlled_pauli(c, folded[x], flag, data);
      if (residual[x] != 0.0) {
        c.rz(residual[x], eps_rz, flag);
        c.scale_phase(std::polar(1.0, residual[x] / 2.0));
      }
    });
  }

  Circuit u = prep.then(sel).then(prep.inverse());
  u.set_register("block", data);
  if (m > 0) u.set_register("index", index);
  u.note_budget("lcu prep", eps / 3.0);
  u.note_budget("lcu unprep", eps / 3.0);
  if (n_residual > 0) u.note_budget("lcu phases", eps / 3.0);
  BlockEncodingReport r = make_report(u, spec.n, alpha, eps);
  return {std::move(u), std::move(r)};
}

void SparseMatrixCOO::validate() const {
  if (n == 0) throw SchemaError("sparse matrix needs at least one qubit");
  const uint64_t dim = uint64_t{1} << n;
  std::map<std::pair<uint64_t, uint64_t>, bool> seen;
  double norm2 = 0.0;
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim)
      throw SchemaError("sparse matrix coordinate out of range");
    if (!seen.emplace(std::make_pair(e.row, e.col), true).second)
      throw SchemaError("duplicate sparse matrix coordinate");
    norm2 += std::norm(e.value);
  }
  if (!(norm2 > 0.0)) throw SchemaError("sparse matrix has zero norm");
}

double SparseMatrixCOO::frobenius() const {
  double norm2 = 0.0;
  for (const auto& e : entries) norm2 += std::norm(e.value);
  return std::sqrt(norm2);
}

std::vector<cplx> SparseMatrixCOO::matrix() const {
  if (n > 10) throw SchemaError("dense sparse-matrix view capped at 10 qubits");
  const size_t dim = size_t{1} << n;
  std::vector<cplx> a(dim * dim, cplx{0.0, 0.0});
  for (const auto& e : entries) a[e.row * dim + e.col] += e.value;
  return a;
}

std::pair<Circuit, BlockEncodingReport> synth_sparse_be(const SparseMatrixCOO& a,
                                                        double eps,
                                                        uint32_t n_anc) {
  a.validate();
  check_eps(eps);
  const uint32_t n = a.n;
  if (n_anc < n)
    throw InfeasibleError("ancilla budget below the row walk requirement");
  const double fro = a.frobenius();
  const uint64_t rows = uint64_t{1} << n;
  const uint32_t n_data = 2 * n;
  const std::vector<uint32_t> r1 = iota_wires(n, 0);
  const std::vector<uint32_t> r2 = iota_wires(n, n);

  // normalized conjugated rows; zero-valued entries are vacuous
  std::vector<std::vector<SparseAmplitude>> row(rows);
  std::vector<double> row_norm(rows, 0.0);
  for (const auto& e : a.entries) {
    if (e.value == cplx{0.0, 0.0}) continue;
    row[e.row].push_back({e.col, std::conj(e.value)});
    row_norm[e.row] = std::hypot(row_norm[e.row], std::abs(e.value));
  }
  for (uint64_t j = 0; j < rows; ++j)
    for (auto& s : row[j]) s.amp /= row_norm[j];

  Circuit ur(n_data);
  std::vector<double> mu(rows, 0.0);
  const uint32_t leaf_anc = n_anc - n;
  emit_select_recursive(ur, r1, 0, rows, [&](Circuit& c, uint64_t x,
                                             uint32_t flag) {
    if (row[x].empty()) return;
    mu[x] = emit_state_sparse(c, r2, row[x], eps / 2.0, leaf_anc, flag);
  });

  std::vector<cplx> w(rows, cplx{0.0, 0.0});
  for (uint64_t j = 0; j < rows; ++j)
    if (row_norm[j] > 0.0) w[j] = std::polar(row_norm[j] / fro, -mu[j]);
  Circuit ul(n_data);
  const double def = emit_state_ucr(ul, r2, w, eps / 2.0, {});
  ul.scale_phase(std::polar(1.0, def));

  Circuit sw(n_data);
  for (uint32_t i = 0; i < n; ++i) emit_swap(sw, r1[i], r2[i]);

  Circuit u = ul.then(sw).then(ur.inverse());
  u.set_register("block", r1);
  u.set_register("aux", r2);
  u.note_budget("sparse-be left factor", eps / 2.0);
  u.note_budget("sparse-be right factor", eps / 2.0);
  BlockEncodingReport r = make_report(u, n, fro, eps);
  return {std::move(u), std::move(r)};
}

double measure_block(const Circuit& c, uint32_t n_block,
                     const std::vector<cplx>& target,
                     BlockEncodingReport& report, const RunCaps& caps) {
  const BlockProbe p = probe_block(c, n_block, caps);
  std::vector<cplx> scaled(p.block.size());
  for (size_t i = 0; i < p.block.size(); ++i)
    scaled[i] = report.alpha * p.block[i];
  report.eps_measured = spectral_distance(scaled, target, p.dim);
  return report.eps_measured;
}

}  // namespace qamc
