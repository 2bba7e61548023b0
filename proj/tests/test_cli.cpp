// SPDX-License-Identifier: MIT
//
// Drives the installed binary end to end: every invocation here runs the
// real executable (path supplied as the harness's first argument), so exit
// codes, file outputs, and stdout bytes are tested exactly as a script or CI
// consumer would see them.

#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string g_qamc;
fs::path g_dir;

struct CmdResult {
  int rc = -1;
  std::string out;
};

CmdResult run(const std::string& args) {
  const std::string cmd = g_qamc + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  CmdResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int st = pclose(p);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string path(const std::string& name) { return (g_dir / name).string(); }

void write(const std::string& name, const std::string& content) {
  std::ofstream out(path(name), std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t count_lines(const std::string& s, const std::string& ending) {
  size_t n = 0, pos = 0;
  while ((pos = s.find(ending, pos)) != std::string::npos) {
    ++n;
    pos += ending.size();
  }
  return n;
}

std::vector<std::string> csv_column(const std::string& csv, size_t col) {
  std::vector<std::string> out;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    REQUIRE(col < fields.size());
    out.push_back(fields[col]);
  }
  return out;
}

}  // namespace

TEST_CASE("state synthesis on the null target emits an empty circuit") {
  write("zero.json", R"({"n": 2, "dense": [[1,0],[0,0],[0,0],[0,0]]})");
  const auto r = run("--out " + path("s0") + " synth-state --mode ucr --eps 1e-3 " +
                     path("zero.json"));
  CHECK(r.rc == 0);
  const std::string circ = slurp(path("s0") + "/circuit.txt");
  CHECK(circ.find("# data 2") != std::string::npos);
  CHECK(circ.find("RY") == std::string::npos);
  const std::string rep = slurp(path("s0") + "/report.json");
  CHECK(rep.find("\"count\": 0") != std::string::npos);

  // and it verifies as the all-zeros state with measured zero
  write("zero_t.json",
        R"({"kind": "state", "n": 2, "dense": [[1,0],[0,0],[0,0],[0,0]]})");
  const auto v =
      run("verify " + path("s0") + "/circuit.txt " + path("zero_t.json"));
  CHECK(v.rc == 0);
  CHECK(v.out.find("\"measured\": 0.0") != std::string::npos);
  CHECK(v.out.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("malformed input exits 2 and writes nothing") {
  write("bad.json", "this is not json");
  const auto r = run("--out " + path("sbad") + " synth-state --mode ucr " +
                     path("bad.json"));
  CHECK(r.rc == 2);
  CHECK_FALSE(fs::exists(path("sbad") + "/circuit.txt"));

  // unknown flag values are schema violations of the invocation
  write("st.json", R"({"n": 1, "dense": [[1,0],[0,0]]})");
  CHECK(run("synth-state --mode bogus " + path("st.json")).rc == 2);
  CHECK(run("frobnicate").rc == 2);
}

TEST_CASE("state round trip catches a mutated circuit") {
  write("st4.json",
        R"({"n": 2, "dense": [[0.5,0],[0.5,0],[0.5,0],[0,0.5]]})");
  const auto r = run("--out " + path("s1") + " synth-state --mode ucr --eps 1e-3 " +
                     path("st4.json"));
  REQUIRE(r.rc == 0);
  write("st4_t.json",
        R"({"kind": "state", "n": 2, "dense": [[0.5,0],[0.5,0],[0.5,0],[0,0.5]], "eps": 1e-9})");
  CHECK(run("verify " + path("s1") + "/circuit.txt " + path("st4_t.json")).rc ==
        0);

  // flipping one wire at the end must push the distance over any tolerance
  write("mutated.txt", slurp(path("s1") + "/circuit.txt") + "X q0\n");
  const auto bad =
      run("verify " + path("mutated.txt") + " " + path("st4_t.json"));
  CHECK(bad.rc == 1);
  CHECK(bad.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("select, sbm, and both saim oracles re-verify at 1e-10") {
  write("sel.json", R"({"m": 2, "L": 1, "strings": ["+X", "-Z", "iY"]})");
  REQUIRE(run("--out " + path("sel") + " synth-select --anc 6 " +
              path("sel.json"))
              .rc == 0);
  write("sel_t.json",
        R"({"kind": "pauli-select", "m": 2, "L": 1, "strings": ["+X", "-Z", "iY"]})");
  CHECK(run("verify " + path("sel") + "/circuit.txt " + path("sel_t.json")).rc ==
        0);

  write("sbm.json",
        R"({"n": 2, "word_bits": 2, "entries": [{"q": 1, "b": 3}, {"q": 2, "b": 1}]})");
  REQUIRE(run("--out " + path("sbm") + " synth-sbm --anc 4 " +
              path("sbm.json"))
              .rc == 0);
  write("sbm_t.json",
        R"({"kind": "sbm", "n": 2, "word_bits": 2, "entries": [{"q": 1, "b": 3}, {"q": 2, "b": 1}]})");
  CHECK(run("verify " + path("sbm") + "/circuit.txt " + path("sbm_t.json")).rc ==
        0);

  const std::string im =
      R"("n": 1, "d": 2, "s": 2, "entries": [{"row": 0, "col": 0, "val": 2}, {"row": 1, "col": 0, "val": 1}, {"row": 1, "col": 1, "val": 3}])";
  write("im.json", "{" + im + "}");
  for (const std::string which : {"oh", "of"}) {
    REQUIRE(run("--out " + path(which) + " synth-saim --which " + which +
                " --anc 8 " + path("im.json"))
                .rc == 0);
    write(which + "_t.json", R"({"kind": "saim-)" + which + R"(", )" + im + "}");
    const auto v = run("verify " + path(which) + "/circuit.txt " +
                       path(which + "_t.json"));
    CHECK(v.rc == 0);
    CHECK(v.out.find("\"tolerance\": 1e-10") != std::string::npos);
  }
}

TEST_CASE("block encoding reports alpha and re-verifies spectrally") {
  write("zx.json",
        R"({"n": 1, "terms": [{"coeff": [0.5, 0], "pauli": "Z"}, {"coeff": [0.5, 0], "pauli": "X"}]})");
  const auto r = run("--out " + path("be") + " synth-be --mode lcu --eps 1e-3 --anc 1 " +
                     path("zx.json"));
  REQUIRE(r.rc == 0);
  const std::string rep = slurp(path("be") + "/report.json");
  CHECK(rep.find("\"alpha\": 1.0") != std::string::npos);
  CHECK(rep.find("\"eps_measured\": null") != std::string::npos);

  write("zx_t.json",
        R"({"kind": "lcu", "n": 1, "terms": [{"coeff": [0.5, 0], "pauli": "Z"}, {"coeff": [0.5, 0], "pauli": "X"}], "eps": 1e-3})");
  CHECK(run("verify " + path("be") + "/circuit.txt " + path("zx_t.json")).rc ==
        0);

  write("coo.json",
        R"({"n": 1, "entries": [{"row": 0, "col": 0, "re": 1, "im": 0}]})");
  REQUIRE(run("--out " + path("bes") + " synth-be --mode sparse --eps 1e-3 --anc 1 " +
              path("coo.json"))
              .rc == 0);
  write("coo_t.json",
        R"({"kind": "sparse-matrix", "n": 1, "entries": [{"row": 0, "col": 0, "re": 1, "im": 0}], "eps": 1e-3})");
  CHECK(run("verify " + path("bes") + "/circuit.txt " + path("coo_t.json")).rc ==
        0);
}

TEST_CASE("infeasible budgets exit 3") {
  write("st8.json",
        R"({"n": 3, "dense": [[0.5,0],[0.5,0],[0.5,0],[0.5,0],[0,0],[0,0],[0,0],[0,0]]})");
  CHECK(run("--out " + path("tr") + " synth-state --mode tradeoff --eps 1e-2 --anc 1 " +
            path("st8.json"))
            .rc == 3);
}

TEST_CASE("oversized verification targets exit 4") {
  write("wide.txt", "# data 12\n");
  write("wide_t.json", R"({"kind": "saim-oh", "n": 5, "d": 2, "s": 1, "entries": [{"row": 0, "col": 0, "val": 1}]})");
  CHECK(run("verify " + path("wide.txt") + " " + path("wide_t.json")).rc == 4);
}

TEST_CASE("bounds subcommand prints the counting minima") {
  const auto r = run("bounds --task saim --n 2 --g 4");
  CHECK(r.rc == 0);
  CHECK(r.out.find("\"target_bits\": 4.584962500721156") != std::string::npos);
  CHECK(r.out.find("\"min_count\": 1") != std::string::npos);
  CHECK(r.out.find("\"min_space_time\": 4") != std::string::npos);

  CHECK(run("bounds --task sparse-be --n 2 --g 4").out.find("\"min_count\": 1") !=
        std::string::npos);
  CHECK(run("bounds --task stateprep --n 2 --g 4").rc == 2);  // missing eps
  CHECK(run("bounds --task stateprep --n 2 --eps 1e-3 --g 4").rc == 0);
}

TEST_CASE("sweep emits deterministic RFC-4180 rows") {
  // single point: header plus exactly one data row, CRLF endings
  const auto one = run("--seed 5 sweep --task state-ucr --n 3 --eps 1e-2");
  CHECK(one.rc == 0);
  CHECK(count_lines(one.out, "\r\n") == 2);
  CHECK(one.out.find("task,n,eps,n_anc,count,t_count,depth,ancilla_peak,"
                     "measured_error") == 0);

  // byte-identical on the same seed, different on another seed
  const auto a = run("--seed 11 sweep --task state-ucr --n 3,4 --eps 1e-2");
  const auto b = run("--seed 11 sweep --task state-ucr --n 3,4 --eps 1e-2");
  const auto c = run("--seed 12 sweep --task state-ucr --n 3,4 --eps 1e-2");
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  // a measured_error column is filled at these sizes and stays tiny
  for (const std::string& v : csv_column(a.out, 8))
    if (v != "measured_error") CHECK(std::stod(v) <= 1e-9);

  // depth is nonincreasing in the ancilla budget at a fixed instance
  const auto sel =
      run("--seed 3 sweep --task select-pauli --n 2 --anc 4,8,16");
  CHECK(sel.rc == 0);
  const std::vector<std::string> depth = csv_column(sel.out, 6);
  REQUIRE(depth.size() == 4);
  CHECK(std::stoull(depth[1]) >= std::stoull(depth[2]));
  CHECK(std::stoull(depth[2]) >= std::stoull(depth[3]));
}

TEST_CASE("concrete cost model expands rotations in the emitted file") {
  write("half.json", R"({"n": 1, "dense": [[0.70710678118654752,0],[0.70710678118654752,0]]})");
  const auto r = run("--cost-model concrete --out " + path("ccc") +
                     " synth-state --mode ucr --eps 1e-2 " + path("half.json"));
  REQUIRE(r.rc == 0);
  const std::string circ = slurp(path("ccc") + "/circuit.txt");
  CHECK(circ.find("RY") == std::string::npos);
  CHECK(circ.find("RZ") == std::string::npos);

  write("half_t.json",
        R"({"kind": "state", "n": 1, "dense": [[0.70710678118654752,0],[0.70710678118654752,0]], "eps": 1e-2})");
  CHECK(run("verify " + path("ccc") + "/circuit.txt " + path("half_t.json")).rc ==
        0);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <qamc-binary> [doctest args]\n");
    return 64;
  }
  g_qamc = argv[1];
  char tmpl[] = "/tmp/qamc_cli_XXXXXX";
  if (!mkdtemp(tmpl)) return 65;
  g_dir = tmpl;
  doctest::Context ctx(argc - 1, argv + 1);
  const int rc = ctx.run();
  fs::remove_all(g_dir);
  return rc;
}
