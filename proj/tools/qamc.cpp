// SPDX-License-Identifier: MIT
//
// Command-line surface: synthesis (synth-*), verification (verify), capacity
// lower bounds (bounds), and scaling sweeps (sweep).
//
// Global flags: --cost-model {abstract|concrete}, --seed <u64>, --out <dir>,
// --rot-db <path>.  Exit codes: 0 success / verification pass, 1
// verification fail, 2 schema violation, 3 infeasible ancilla budget, 4
// resource cap exceeded.
//
// synth-* writes <out>/circuit.txt plus <out>/report.json; verify, bounds,
// and sweep write their report / CSV to stdout.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qamc/block_encoding.hpp"
#include "qamc/boolean_memory.hpp"
#include "qamc/bounds.hpp"
#include "qamc/instances.hpp"
#include "qamc/io.hpp"
#include "qamc/rotation.hpp"
#include "qamc/select.hpp"
#include "qamc/sim.hpp"
#include "qamc/state_prep.hpp"

namespace {

using namespace qamc;

struct GlobalFlags {
  std::string cost_model = "abstract";
  uint64_t seed = 0;
  std::string out_dir = ".";
  std::string rot_db;

  CostConfig cost() const {
    CostConfig cfg;
    cfg.model = cost_model == "concrete" ? CostModel::Concrete
                                         : CostModel::Abstract;
    return cfg;
  }
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint64_t bit_reverse(uint64_t v, uint32_t bits) {
  uint64_t out = 0;
  for (uint32_t i = 0; i < bits; ++i)
    if ((v >> i) & 1) out |= uint64_t{1} << (bits - 1 - i);
  return out;
}

// --- reference unitaries for the access-model verify targets --------------

std::vector<cplx> ref_select_unitary(const PauliSelectSpec& s) {
  const uint64_t half = uint64_t{1} << s.l;
  const uint64_t dim = uint64_t{1} << (s.m + s.l);
  std::vector<cplx> u(dim * dim, 0.0);
  for (uint64_t q = 0; q < (uint64_t{1} << s.m); ++q) {
    if (q < s.strings.size()) {
      const std::vector<cplx> p = s.strings[q].matrix();
      for (uint64_t r = 0; r < half; ++r)
        for (uint64_t c = 0; c < half; ++c)
          u[(q * half + r) * dim + (q * half + c)] = p[r * half + c];
    } else {
      for (uint64_t r = 0; r < half; ++r)
        u[(q * half + r) * dim + (q * half + r)] = 1.0;
    }
  }
  return u;
}

std::vector<cplx> ref_sbm_unitary(const SbmSpec& s) {
  const uint64_t words = uint64_t{1} << s.word_bits;
  const uint64_t dim = (uint64_t{1} << s.n) * words;
  std::vector<cplx> u(dim * dim, 0.0);
  for (uint64_t q = 0; q < (uint64_t{1} << s.n); ++q) {
    uint64_t b = 0;
    for (const auto& e : s.entries)
      if (e.q == q) b = e.b;
    // word bit j lives on wire n + j, the (j+1)-th most significant of the
    // word block, so the basis suffix XORs with the bit-reversed value
    const uint64_t suffix = bit_reverse(b, s.word_bits);
    for (uint64_t z = 0; z < words; ++z)
      u[(q * words + (z ^ suffix)) * dim + (q * words + z)] = 1.0;
  }
  return u;
}

std::vector<cplx> ref_oh_unitary(IntMatrix a) {
  a.normalize();
  const uint64_t size = uint64_t{1} << a.n;
  const uint64_t words = uint64_t{1} << a.d;
  const uint64_t dim = size * size * words;
  std::vector<cplx> u(dim * dim, 0.0);
  for (uint64_t x = 0; x < size; ++x)
    for (uint64_t y = 0; y < size; ++y) {
      uint64_t val = 0;
      for (const auto& e : a.entries)
        if (e.row == x && e.col == y) val = e.val;
      const uint64_t suffix = bit_reverse(val, a.d);
      for (uint64_t z = 0; z < words; ++z)
        u[((x * size + y) * words + (z ^ suffix)) * dim +
          ((x * size + y) * words + z)] = 1.0;
    }
  return u;
}

std::vector<cplx> ref_of_unitary(IntMatrix a) {
  a.normalize();
  const uint64_t size = uint64_t{1} << a.n;
  const uint64_t dim = size * size;
  std::vector<cplx> u(dim * dim, 0.0);
  for (uint64_t x = 0; x < size; ++x) {
    std::vector<uint64_t> cols;
    for (const auto& e : a.entries)
      if (e.row == x) cols.push_back(e.col);
    std::sort(cols.begin(), cols.end());
    std::vector<uint64_t> rest;
    for (uint64_t c = 0; c < size; ++c)
      if (std::find(cols.begin(), cols.end(), c) == cols.end())
        rest.push_back(c);
    for (uint64_t k = 0; k < size; ++k) {
      const uint64_t f = k < cols.size() ? cols[k] : rest[k - cols.size()];
      u[(x * size + f) * dim + (x * size + k)] = 1.0;
    }
  }
  return u;
}

RotationSynthesizer& shared_synth(const GlobalFlags& g) {
  static RotationSynthesizer synth;
  static bool loaded = false;
  if (!loaded) {
    loaded = true;
    if (!g.rot_db.empty()) synth.load_database(g.rot_db);
  }
  return synth;
}

// under the concrete cost model every abstract rotation is expanded to its
// Clifford+T sequence, so the emitted circuit and its metrics are the final
// gate-level article
Circuit maybe_expand(const GlobalFlags& g, const Circuit& c) {
  if (g.cost_model != "concrete") return c;
  Circuit out = expand_rotations(c, shared_synth(g));
  if (!g.rot_db.empty()) shared_synth(g).save_database(g.rot_db);
  return out;
}

// --- synth subcommands ------------------------------------------------------

void write_synth_outputs(const GlobalFlags& g, const Circuit& c,
                         const std::string& report) {
  std::filesystem::create_directories(g.out_dir);
  write_file(g.out_dir + "/circuit.txt", c.to_text());
  write_file(g.out_dir + "/report.json", report);
}

void run_synth_state(const GlobalFlags& g, const std::string& mode,
                     double eps, uint32_t anc, const std::string& input) {
  const AmplitudeVector a = read_state_json(read_file(input));
  Circuit c;
  if (mode == "ucr")
    c = synth_state_ucr(a, eps);
  else if (mode == "tree")
    c = synth_state_tree(a, eps);
  else if (mode == "tradeoff")
    c = synth_state_tradeoff(a, eps, anc);
  else
    c = synth_sparse_state(a, eps, anc);
  c = maybe_expand(g, c);
  write_synth_outputs(g, c, metrics_json(c.metrics(g.cost())));
}

void run_synth_select(const GlobalFlags& g, uint32_t anc,
                      const std::string& input) {
  const PauliSelectSpec s = read_pauli_select_json(read_file(input));
  const Circuit c = maybe_expand(g, synth_select_pauli(s.m, s.l, s.strings, anc));
  write_synth_outputs(g, c, metrics_json(c.metrics(g.cost())));
}

void run_synth_sbm(const GlobalFlags& g, uint32_t anc,
                   const std::string& input) {
  const SbmSpec s = read_sbm_json(read_file(input));
  const Circuit c = maybe_expand(g, synth_sbm(s.n, s.word_bits, s.entries, anc));
  write_synth_outputs(g, c, metrics_json(c.metrics(g.cost())));
}

void run_synth_saim(const GlobalFlags& g, const std::string& which,
                    uint32_t anc, const std::string& input) {
  const IntMatrix a = read_int_matrix_json(read_file(input));
  const Circuit c =
      maybe_expand(g, which == "oh" ? synth_oh(a, anc) : synth_of(a, anc));
  write_synth_outputs(g, c, metrics_json(c.metrics(g.cost())));
}

void run_synth_be(const GlobalFlags& g, const std::string& mode, double eps,
                  uint32_t anc, const std::string& input) {
  std::pair<Circuit, BlockEncodingReport> r;
  if (mode == "lcu")
    r = synth_pauli_lcu_be(read_lcu_json(read_file(input)), eps, anc);
  else
    r = synth_sparse_be(read_sparse_matrix_json(read_file(input)), eps, anc);
  r.first = maybe_expand(g, r.first);
  r.second.resource = r.first.metrics(g.cost());
  write_synth_outputs(g, r.first, be_report_json(r.second));
}

// --- verify -----------------------------------------------------------------

constexpr uint32_t kVerifyBlockWires = 10;  // entrywise unitary probes
constexpr uint32_t kVerifySpectralWires = 9;  // spectral block probes

double optional_eps(const std::string& text, double fallback) {
  // minimal second pass: the schema readers ignore unknown fields, so a
  // plain search keyed on the exact field name is enough here
  const auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("eps") &&
      j.at("eps").is_number())
    return j.at("eps").get<double>();
  return fallback;
}

template <typename RefBuilder>
VerifyReport verify_against_unitary(const Circuit& c, uint32_t n_block,
                                    const RefBuilder& build_ref, double tol) {
  if (n_block > kVerifyBlockWires)
    throw CapError("verification block wider than 10 wires");
  const std::vector<cplx> ref = build_ref();
  const BlockProbe p = probe_block(c, n_block);
  VerifyReport r;
  r.metric = "unitary_entrywise";
  r.measured = std::max(entrywise_distance(p.block, ref), p.leakage);
  r.tolerance = tol;
  r.pass = r.measured <= tol;
  return r;
}

VerifyReport run_verify(const GlobalFlags& g, const std::string& circuit_path,
                        const std::string& target_path) {
  const Circuit c = Circuit::from_text(read_file(circuit_path));
  const std::string text = read_file(target_path);
  const auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("kind") ||
      !j.at("kind").is_string())
    throw SchemaError("verify target needs a string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "state") {
    const AmplitudeVector a = read_state_json(text);
    if (a.n != c.n_data())
      throw SchemaError("circuit width does not match the target state");
    const StateProbe p = probe_state(maybe_expand(g, c));
    VerifyReport r;
    r.metric = "state_distance";
    r.measured = state_distance(p.state, a.to_dense());
    r.tolerance = optional_eps(text, 1e-9);
    r.pass = r.measured <= r.tolerance;
    return r;
  }
  if (kind == "pauli-select") {
    const PauliSelectSpec s = read_pauli_select_json(text);
    return verify_against_unitary(
        c, s.m + s.l, [&] { return ref_select_unitary(s); }, optional_eps(text, 1e-10));
  }
  if (kind == "sbm") {
    const SbmSpec s = read_sbm_json(text);
    return verify_against_unitary(
        c, s.n + s.word_bits, [&] { return ref_sbm_unitary(s); }, optional_eps(text, 1e-10));
  }
  if (kind == "saim-oh") {
    const IntMatrix a = read_int_matrix_json(text);
    return verify_against_unitary(
        c, 2 * a.n + a.d, [&] { return ref_oh_unitary(a); }, optional_eps(text, 1e-10));
  }
  if (kind == "saim-of") {
    const IntMatrix a = read_int_matrix_json(text);
    return verify_against_unitary(
        c, 2 * a.n, [&] { return ref_of_unitary(a); }, optional_eps(text, 1e-10));
  }
  if (kind == "lcu" || kind == "sparse-matrix") {
    std::vector<cplx> target;
    double alpha = 0.0;
    uint32_t n = 0;
    if (kind == "lcu") {
      const LcuSpec spec = read_lcu_json(text);
      spec.validate();
      target = spec.matrix();
      alpha = spec.alpha();
      n = spec.n;
    } else {
      const SparseMatrixCOO a = read_sparse_matrix_json(text);
      a.validate();
      target = a.matrix();
      alpha = a.frobenius();
      n = a.n;
    }
    if (n > kVerifySpectralWires)
      throw CapError("verification block wider than 9 wires");
    if (n > c.n_total())
      throw SchemaError("circuit is narrower than the target matrix");
    const BlockProbe p = probe_block(maybe_expand(g, c), n);
    std::vector<cplx> scaled = p.block;
    for (auto& v : scaled) v *= alpha;
    VerifyReport r;
    r.metric = "block_spectral";
    r.measured = spectral_distance(scaled, target, p.dim);
    r.tolerance = optional_eps(text, 1e-9);
    r.pass = r.measured <= r.tolerance;
    return r;
  }
  throw SchemaError("unknown verify target kind: " + kind);
}

// --- bounds -----------------------------------------------------------------

std::string run_bounds(const std::string& task, uint32_t n,
                       std::optional<double> eps, uint32_t g) {
  if (task == "saim") return bound_json(saim_lower_bound(n, g));
  if (task == "sparse-be") return bound_json(sparse_be_lower_bound(n, g));
  if (!eps) throw SchemaError("stateprep bounds need --eps");
  return bound_json(stateprep_lower_bound(n, *eps, g));
}

// --- sweep ------------------------------------------------------------------

struct SweepPoint {
  Circuit c;
  std::optional<BlockEncodingReport> be;
  std::optional<double> measured;
};

bool task_takes_eps(const std::string& t) {
  return t.starts_with("state-") || t.starts_with("be-");
}

bool task_takes_anc(const std::string& t) {
  return t != "state-ucr" && t != "state-tree";
}

void run_sweep(const GlobalFlags& g, const std::string& task,
               const std::vector<uint32_t>& ns,
               const std::vector<double>& epss,
               const std::vector<uint32_t>& ancs, std::ostream& os) {
  if (ns.empty() || epss.empty() || ancs.empty())
    throw SchemaError("sweep ranges must be nonempty");
  Rand rng(g.seed);
  os << csv_row({"task", "n", "eps", "n_anc", "count", "t_count", "depth",
                 "ancilla_peak", "measured_error"});
  for (const uint32_t n : ns) {
    // one instance per size, shared across the eps and ancilla axes
    AmplitudeVector state;
    std::vector<PauliString> strings;
    std::vector<SbmEntry> sbm_entries;
    IntMatrix saim_matrix;
    LcuSpec lcu;
    SparseMatrixCOO coo;
    if (task.starts_with("state-"))
      state = random_dense_state(rng, n);
    else if (task == "select-pauli")
      strings = random_pauli_strings(rng, n, uint32_t{1} << n);
    else if (task == "sbm")
      sbm_entries = random_sbm_entries(
          rng, n, n, static_cast<uint32_t>(std::min<uint64_t>(4, uint64_t{1} << n)));
    else if (task.starts_with("saim-"))
      saim_matrix = random_int_matrix(
          rng, n, 2, static_cast<uint32_t>(std::min<uint64_t>(2, uint64_t{1} << n)));
    else if (task == "be-lcu")
      lcu = random_lcu(rng, n,
                       static_cast<uint32_t>(std::min<uint64_t>(4, uint64_t{1} << n)));
    else if (task == "be-sparse")
      coo = random_sparse_matrix(
          rng, n, static_cast<uint32_t>(std::min<uint64_t>(2, uint64_t{1} << n)));
    else
      throw SchemaError("unknown sweep task: " + task);

    const size_t eps_points = task_takes_eps(task) ? epss.size() : 1;
    const size_t anc_points = task_takes_anc(task) ? ancs.size() : 1;
    for (size_t ei = 0; ei < eps_points; ++ei)
      for (size_t ai = 0; ai < anc_points; ++ai) {
        const double eps = epss[ei];
        const uint32_t anc = ancs[ai];
        SweepPoint pt;
        if (task == "state-ucr") {
          pt.c = synth_state_ucr(state, eps);
        } else if (task == "state-tree") {
          pt.c = synth_state_tree(state, eps);
        } else if (task == "state-tradeoff") {
          pt.c = synth_state_tradeoff(state, eps, anc);
        } else if (task == "select-pauli") {
          pt.c = synth_select_pauli(n, n, strings, anc);
        } else if (task == "sbm") {
          pt.c = synth_sbm(n, n, sbm_entries, anc);
        } else if (task == "saim-oh") {
          pt.c = synth_oh(saim_matrix, anc);
        } else if (task == "saim-of") {
          pt.c = synth_of(saim_matrix, anc);
        } else if (task == "be-lcu") {
          auto r = synth_pauli_lcu_be(lcu, eps, anc);
          pt.c = std::move(r.first);
          pt.be = std::move(r.second);
        } else {
          auto r = synth_sparse_be(coo, eps, anc);
          pt.c = std::move(r.first);
          pt.be = std::move(r.second);
        }

        pt.c = maybe_expand(g, pt.c);

        // simulate small instances only
        if (task.starts_with("state-") && n <= 10) {
          const StateProbe p = probe_state(pt.c);
          pt.measured = state_distance(p.state, state.to_dense());
        } else if (task == "select-pauli" && 2 * n <= 8) {
          PauliSelectSpec s{n, n, strings};
          const BlockProbe p = probe_block(pt.c, 2 * n);
          pt.measured = std::max(
              entrywise_distance(p.block, ref_select_unitary(s)), p.leakage);
        } else if (task == "sbm" && 2 * n <= 8) {
          SbmSpec s{n, n, sbm_entries};
          const BlockProbe p = probe_block(pt.c, 2 * n);
          pt.measured = std::max(
              entrywise_distance(p.block, ref_sbm_unitary(s)), p.leakage);
        } else if (task == "saim-oh" && 2 * n + 2 <= 8) {
          const BlockProbe p = probe_block(pt.c, 2 * n + 2);
          pt.measured = std::max(
              entrywise_distance(p.block, ref_oh_unitary(saim_matrix)),
              p.leakage);
        } else if (task == "saim-of" && 2 * n <= 8) {
          const BlockProbe p = probe_block(pt.c, 2 * n);
          pt.measured = std::max(
              entrywise_distance(p.block, ref_of_unitary(saim_matrix)),
              p.leakage);
        } else if (task == "be-lcu" && n <= 6) {
          pt.measured = measure_block(pt.c, n, lcu.matrix(), *pt.be);
        } else if (task == "be-sparse" && n <= 6) {
          pt.measured = measure_block(pt.c, n, coo.matrix(), *pt.be);
        }

        const ResourceReport m = pt.c.metrics(g.cost());
        os << csv_row({task, std::to_string(n),
                       task_takes_eps(task) ? fmt_double(eps) : "",
                       task_takes_anc(task) ? std::to_string(anc) : "",
                       std::to_string(m.count), std::to_string(m.t_count),
                       std::to_string(m.depth), std::to_string(m.ancilla_peak),
                       pt.measured ? fmt_double(*pt.measured) : ""});
      }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compiler from classical data to Clifford+T access circuits"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--cost-model", g.cost_model)
      ->check(CLI::IsMember({"abstract", "concrete"}));
  app.add_option("--seed", g.seed);
  app.add_option("--out", g.out_dir);
  app.add_option("--rot-db", g.rot_db);

  int exit_code = 0;

  // synth-state
  auto* st = app.add_subcommand("synth-state", "prepare an amplitude vector");
  st->fallthrough();
  std::string st_mode = "ucr";
  double st_eps = 1e-3;
  uint32_t st_anc = 0;
  std::string st_input;
  st->add_option("--mode", st_mode)
      ->check(CLI::IsMember({"ucr", "tree", "tradeoff", "sparse"}));
  st->add_option("--eps", st_eps);
  st->add_option("--anc", st_anc);
  st->add_option("input", st_input)->required();
  st->callback([&] { run_synth_state(g, st_mode, st_eps, st_anc, st_input); });

  // synth-select
  auto* se = app.add_subcommand("synth-select", "select over pauli strings");
  se->fallthrough();
  uint32_t se_anc = 0;
  std::string se_input;
  se->add_option("--anc", se_anc);
  se->add_option("input", se_input)->required();
  se->callback([&] { run_synth_select(g, se_anc, se_input); });

  // synth-sbm
  auto* sb = app.add_subcommand("synth-sbm", "sparse boolean memory");
  sb->fallthrough();
  uint32_t sb_anc = 0;
  std::string sb_input;
  sb->add_option("--anc", sb_anc);
  sb->add_option("input", sb_input)->required();
  sb->callback([&] { run_synth_sbm(g, sb_anc, sb_input); });

  // synth-saim
  auto* sa = app.add_subcommand("synth-saim", "sparse-access oracles");
  sa->fallthrough();
  std::string sa_which = "oh";
  uint32_t sa_anc = 0;
  std::string sa_input;
  sa->add_option("--which", sa_which)->check(CLI::IsMember({"oh", "of"}));
  sa->add_option("--anc", sa_anc);
  sa->add_option("input", sa_input)->required();
  sa->callback([&] { run_synth_saim(g, sa_which, sa_anc, sa_input); });

  // synth-be
  auto* be = app.add_subcommand("synth-be", "block encoding");
  be->fallthrough();
  std::string be_mode = "lcu";
  double be_eps = 1e-3;
  uint32_t be_anc = 0;
  std::string be_input;
  be->add_option("--mode", be_mode)->check(CLI::IsMember({"lcu", "sparse"}));
  be->add_option("--eps", be_eps);
  be->add_option("--anc", be_anc);
  be->add_option("input", be_input)->required();
  be->callback([&] { run_synth_be(g, be_mode, be_eps, be_anc, be_input); });

  // verify
  auto* ve = app.add_subcommand("verify", "re-verify a circuit file");
  ve->fallthrough();
  std::string ve_circuit, ve_target;
  ve->add_option("circuit", ve_circuit)->required();
  ve->add_option("target", ve_target)->required();
  ve->callback([&] {
    const VerifyReport r = run_verify(g, ve_circuit, ve_target);
    std::cout << verify_report_json(r);
    exit_code = r.pass ? 0 : 1;
  });

  // bounds
  auto* bo = app.add_subcommand("bounds", "counting lower bounds");
  bo->fallthrough();
  std::string bo_task;
  uint32_t bo_n = 0, bo_g = 0;
  std::optional<double> bo_eps;
  bo->add_option("--task", bo_task)
      ->required()
      ->check(CLI::IsMember({"saim", "sparse-be", "stateprep"}));
  bo->add_option("--n", bo_n)->required();
  bo->add_option("--eps", bo_eps);
  bo->add_option("--g", bo_g)->required();
  bo->callback([&] { std::cout << run_bounds(bo_task, bo_n, bo_eps, bo_g); });

  // sweep
  auto* sw = app.add_subcommand("sweep", "scaling sweep to CSV");
  sw->fallthrough();
  std::string sw_task;
  std::vector<uint32_t> sw_ns;
  std::vector<double> sw_eps = {1e-3};
  std::vector<uint32_t> sw_anc = {0};
  sw->add_option("--task", sw_task)
      ->required()
      ->check(CLI::IsMember({"state-ucr", "state-tree", "state-tradeoff",
                             "select-pauli", "sbm", "saim-oh", "saim-of",
                             "be-lcu", "be-sparse"}));
  sw->add_option("--n", sw_ns)->required()->delimiter(',');
  sw->add_option("--eps", sw_eps)->delimiter(',');
  sw->add_option("--anc", sw_anc)->delimiter(',');
  sw->callback([&] { run_sweep(g, sw_task, sw_ns, sw_eps, sw_anc, std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 4;
  }
  return exit_code;
}
