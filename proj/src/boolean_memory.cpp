// SPDX-License-Identifier: MIT

#include "qamc/boolean_memory.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

#include "qamc/gadgets.hpp"

namespace qamc {

namespace {

// Single-entry conjunction directly on the index wires.
void emit_entry_serial(Circuit& c, const std::vector<uint32_t>& idx,
                       const std::vector<uint32_t>& word, const SbmEntry& e,
                       std::optional<uint32_t> ctrl) {
  const uint32_t n = static_cast<uint32_t>(idx.size());
  std::vector<uint32_t> lits;
  std::vector<bool> pol;
  if (ctrl) {
    lits.push_back(*ctrl);
    pol.push_back(true);
  }
  for (uint32_t i = 0; i < n; ++i) {
    lits.push_back(idx[i]);
    pol.push_back(((e.q >> (n - 1 - i)) & 1) != 0);
  }
  if (lits.size() == 1) {
    if (!pol[0]) c.x(lits[0]);
    for (uint32_t j = 0; j < word.size(); ++j)
      if ((e.b >> j) & 1) c.cnot(lits[0], word[j]);
    if (!pol[0]) c.x(lits[0]);
    return;
  }
  const AndTree tree = emit_and_tree(c, lits, pol);
  for (uint32_t j = 0; j < word.size(); ++j)
    if ((e.b >> j) & 1) c.cnot(tree.flag, word[j]);
  emit_and_tree_inverse(c, lits, pol, tree);
}

// One group of g >= 2 entries computed in parallel: every entry gets its own
// copy of each index literal (and of the control), an AND flag, and enough
// flag copies to feed all of its word bits.  Flags across entries are
// one-hot (q values are distinct), so a word bit is the XOR-fold of the
// flag copies feeding it.
void emit_entry_group(Circuit& c, const std::vector<uint32_t>& idx,
                      const std::vector<uint32_t>& word,
                      const SbmEntry* entries, uint64_t g,
                      std::optional<uint32_t> ctrl) {
  const uint32_t n = static_cast<uint32_t>(idx.size());
  std::vector<std::function<void()>> undo;
  std::vector<uint32_t> anc;

  auto fan_into = [&](uint32_t srcw, uint64_t k) {
    auto copies = c.alloc_ancillas(static_cast<uint32_t>(k));
    anc.insert(anc.end(), copies.begin(), copies.end());
    emit_fanout(c, srcw, copies);
    undo.push_back([&c, srcw, copies] { emit_fanout_inverse(c, srcw, copies); });
    return copies;
  };

  // src[k][i]: entry k's private copy of idx[i] (entry 0 keeps the original).
  std::vector<std::vector<uint32_t>> src(g, std::vector<uint32_t>(n));
  for (uint32_t i = 0; i < n; ++i) {
    const auto copies = fan_into(idx[i], g - 1);
    src[0][i] = idx[i];
    for (uint64_t k = 1; k < g; ++k) src[k][i] = copies[k - 1];
  }
  std::vector<uint32_t> csrc;
  if (ctrl) {
    const auto copies = fan_into(*ctrl, g - 1);
    csrc.push_back(*ctrl);
    csrc.insert(csrc.end(), copies.begin(), copies.end());
  }

  // Conjunction flags.
  std::vector<uint32_t> flag(g);
  for (uint64_t k = 0; k < g; ++k) {
    std::vector<uint32_t> lits;
    std::vector<bool> pol;
    if (ctrl) {
      lits.push_back(csrc[k]);
      pol.push_back(true);
    }
    for (uint32_t i = 0; i < n; ++i) {
      lits.push_back(src[k][i]);
      pol.push_back(((entries[k].q >> (n - 1 - i)) & 1) != 0);
    }
    if (lits.size() == 1) {
      // The private copy itself is the flag; polarity by in-place X.
      flag[k] = lits[0];
      if (!pol[0]) {
        c.x(lits[0]);
        undo.push_back([&c, w = lits[0]] { c.x(w); });
      }
    } else {
      const AndTree tree = emit_and_tree(c, lits, pol);
      undo.push_back([&c, lits, pol, tree] {
        emit_and_tree_inverse(c, lits, pol, tree);
      });
      flag[k] = tree.flag;
    }
  }

  // Flag copies, one per word bit an entry writes.
  std::vector<std::vector<uint32_t>> cells(g);
  for (uint64_t k = 0; k < g; ++k) {
    int bits = 0;
    for (uint32_t j = 0; j < word.size(); ++j)
      if ((entries[k].b >> j) & 1) ++bits;
    cells[k].push_back(flag[k]);
    if (bits >= 2) {
      const auto copies = fan_into(flag[k], static_cast<uint64_t>(bits - 1));
      cells[k].insert(cells[k].end(), copies.begin(), copies.end());
    }
  }

  // Word columns.
  std::vector<size_t> used(g, 0);
  for (uint32_t j = 0; j < word.size(); ++j) {
    std::vector<uint32_t> col;
    for (uint64_t k = 0; k < g; ++k)
      if ((entries[k].b >> j) & 1) col.push_back(cells[k][used[k]++]);
    if (col.empty()) continue;
    with_xor_fold(c, col, [&](uint32_t root) { c.cnot(root, word[j]); });
  }

  for (auto it = undo.rbegin(); it != undo.rend(); ++it) (*it)();
  c.free_ancillas(anc);
}

void fill_index_wires(Circuit& c, uint32_t n, std::vector<uint32_t>& out,
                      uint32_t from) {
  (void)c;
  for (uint32_t i = 0; i < n; ++i) out.push_back(from + i);
}

}  // namespace

void emit_sbm(Circuit& c, const std::vector<uint32_t>& idx,
              const std::vector<uint32_t>& word,
              const std::vector<SbmEntry>& entries_in, uint32_t n_anc,
              std::optional<uint32_t> ctrl) {
  std::vector<SbmEntry> entries;
  for (const auto& e : entries_in)
    if (e.b != 0) entries.push_back(e);
  if (entries.empty()) return;
  const uint32_t n = static_cast<uint32_t>(idx.size());
  if (n == 0) {
    for (uint32_t j = 0; j < word.size(); ++j)
      if ((entries[0].b >> j) & 1) {
        if (ctrl)
          c.cnot(*ctrl, word[j]);
        else
          c.x(word[j]);
      }
    return;
  }
  const uint64_t s = entries.size();
  const uint64_t w =
      std::max<uint64_t>(1, std::min<uint64_t>(s, n_anc / n));
  for (uint64_t g0 = 0; g0 < s; g0 += w) {
    const uint64_t g = std::min(w, s - g0);
    if (g == 1)
      emit_entry_serial(c, idx, word, entries[g0], ctrl);
    else
      emit_entry_group(c, idx, word, entries.data() + g0, g, ctrl);
  }
}

Circuit synth_sbm(uint32_t n, uint32_t word_bits,
                  const std::vector<SbmEntry>& entries, uint32_t n_anc) {
  if (word_bits >= 64 || n >= 32)
    throw SchemaError("sbm: register sizes out of range");
  std::map<uint64_t, uint64_t> seen;
  for (const auto& e : entries) {
    if (n < 64 && e.q >= (uint64_t{1} << n))
      throw SchemaError("sbm: index value out of range");
    if (e.b == 0) throw SchemaError("sbm: zero-valued entry");
    if (e.b >> word_bits) throw SchemaError("sbm: word value out of range");
    if (!seen.emplace(e.q, e.b).second)
      throw SchemaError("sbm: duplicate index value");
  }
  Circuit c(n + word_bits);
  std::vector<uint32_t> idx, word;
  fill_index_wires(c, n, idx, 0);
  fill_index_wires(c, word_bits, word, n);
  c.set_register("index", idx);
  c.set_register("word", word);
  emit_sbm(c, idx, word, entries, n_anc);
  c.check_balanced();
  return c;
}

void IntMatrix::normalize() {
  if (n >= 16) throw SchemaError("matrix: index width out of range");
  if (d >= 64) throw SchemaError("matrix: value width out of range");
  std::vector<IntMatrixEntry> kept;
  for (const auto& e : entries) {
    if (e.row >= (uint64_t{1} << n) || e.col >= (uint64_t{1} << n))
      throw SchemaError("matrix: entry position out of range");
    if (e.val >> d) throw SchemaError("matrix: entry value out of range");
    if (e.val != 0) kept.push_back(e);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::map<uint64_t, uint32_t> row_cnt, col_cnt;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i && kept[i].row == kept[i - 1].row && kept[i].col == kept[i - 1].col)
      throw SchemaError("matrix: duplicate entry position");
    if (++row_cnt[kept[i].row] > s || ++col_cnt[kept[i].col] > s)
      throw SchemaError("matrix: sparsity bound violated");
  }
  entries = std::move(kept);
}

Circuit synth_oh(const IntMatrix& a_in, uint32_t n_anc) {
  IntMatrix a = a_in;
  a.normalize();
  const uint32_t n = a.n, d = a.d;
  Circuit c(2 * n + d);
  std::vector<uint32_t> x, y, word, idx;
  fill_index_wires(c, n, x, 0);
  fill_index_wires(c, n, y, n);
  fill_index_wires(c, d, word, 2 * n);
  c.set_register("x", x);
  c.set_register("y", y);
  c.set_register("word", word);
  idx = x;
  idx.insert(idx.end(), y.begin(), y.end());
  std::vector<SbmEntry> entries;
  for (const auto& e : a.entries)
    entries.push_back({(e.row << n) | e.col, e.val});
  emit_sbm(c, idx, word, entries, n_anc);
  c.check_balanced();
  return c;
}

Circuit synth_of(const IntMatrix& a_in, uint32_t n_anc) {
  IntMatrix a = a_in;
  a.normalize();
  const uint32_t n = a.n;
  if (n > 6) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "position oracle: permutation completion enumerates all "
                  "2^%u columns per row; supported up to n = 6, requested "
                  "n = %u",
                  n, n);
    throw CapError(buf);
  }
  const uint64_t N = uint64_t{1} << n;

  // F(x, k) per row: stored columns ascending, then the remaining columns
  // ascending; rows without entries are the identity.
  std::vector<std::vector<uint64_t>> F(N);
  {
    size_t at = 0;
    for (uint64_t row = 0; row < N; ++row) {
      std::vector<bool> taken(N, false);
      auto& f = F[row];
      while (at < a.entries.size() && a.entries[at].row == row) {
        f.push_back(a.entries[at].col);
        taken[a.entries[at].col] = true;
        ++at;
      }
      for (uint64_t col = 0; col < N; ++col)
        if (!taken[col]) f.push_back(col);
    }
  }

  Circuit c(2 * n);
  std::vector<uint32_t> x, k;
  fill_index_wires(c, n, x, 0);
  fill_index_wires(c, n, k, n);
  c.set_register("x", x);
  c.set_register("k", k);
  std::vector<uint32_t> idx = x;
  idx.insert(idx.end(), k.begin(), k.end());

  const auto anc = c.alloc_ancillas(n);
  // Wire k[j] carries bit n-1-j of the index value, so the word vector
  // listing the wire of bit l must be reversed relative to wire order.
  std::vector<uint32_t> word_anc(anc.rbegin(), anc.rend());

  const uint32_t sub_anc = n_anc > n ? n_anc - n : 0;

  // Step 1: write F(x, k) into the ancilla register.
  std::vector<SbmEntry> write;
  for (uint64_t row = 0; row < N; ++row)
    for (uint64_t kk = 0; kk < N; ++kk)
      if (F[row][kk] != 0) write.push_back({(row << n) | kk, F[row][kk]});
  emit_sbm(c, idx, word_anc, write, sub_anc);

  // Step 2: swap the k register with the ancilla register.
  for (uint32_t j = 0; j < n; ++j) emit_swap(c, k[j], anc[j]);

  // Step 3: the ancilla register now holds k and the index reads (x, y);
  // XOR-ing k = F^{-1}(x, y) into the ancillas restores them to |0>.
  std::vector<SbmEntry> erase;
  for (uint64_t row = 0; row < N; ++row)
    for (uint64_t kk = 0; kk < N; ++kk)
      if (kk != 0) erase.push_back({(row << n) | F[row][kk], kk});
  std::sort(erase.begin(), erase.end(),
            [](const SbmEntry& l, const SbmEntry& r) { return l.q < r.q; });
  emit_sbm(c, idx, word_anc, erase, sub_anc);

  c.free_ancillas(anc);
  c.check_balanced();
  return c;
}

}  // namespace qamc
