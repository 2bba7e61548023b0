// SPDX-License-Identifier: MIT
//
// JSON readers for every task input schema, JSON writers for the report
// types, and RFC 4180 CSV helpers.  Readers throw SchemaError with a
// human-readable diagnostic on any malformed document; writers are
// deterministic (fixed field order, shortest round-trip float formatting).

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qamc/block_encoding.hpp"
#include "qamc/boolean_memory.hpp"
#include "qamc/bounds.hpp"
#include "qamc/pauli.hpp"
#include "qamc/state_prep.hpp"

namespace qamc {

// {"n": int, "dense": [[re, im], ...]}  or
// {"n": int, "sparse": [{"index": int, "re": .., "im": ..}, ...]}
AmplitudeVector read_state_json(const std::string& text);

// {"m": int, "L": int, "strings": ["+XZY...", ...]}
struct PauliSelectSpec {
  uint32_t m = 0;
  uint32_t l = 0;
  std::vector<PauliString> strings;
};
PauliSelectSpec read_pauli_select_json(const std::string& text);

// {"n": int, "word_bits": int, "entries": [{"q": int, "b": int}, ...]}
struct SbmSpec {
  uint32_t n = 0;
  uint32_t word_bits = 0;
  std::vector<SbmEntry> entries;
};
SbmSpec read_sbm_json(const std::string& text);

// {"n": int, "d": int, "s": int,
//  "entries": [{"row": int, "col": int, "val": int}, ...]}
IntMatrix read_int_matrix_json(const std::string& text);

// {"n": int, "terms": [{"coeff": [re, im], "pauli": "+XZ..."}, ...]}
LcuSpec read_lcu_json(const std::string& text);

// {"n": int, "entries": [{"row": int, "col": int, "re": .., "im": ..}, ...]}
SparseMatrixCOO read_sparse_matrix_json(const std::string& text);

// {"count", "t_count", "depth", "t_depth", "ancilla_peak"}
std::string metrics_json(const ResourceReport& r);

// {"alpha", "n_anc", "eps_requested", "eps_measured", "resource": {...}};
// eps_measured serializes as null until measured
std::string be_report_json(const BlockEncodingReport& r);

// {"target_bits", "min_count", "min_space_time"}
std::string bound_json(const LowerBound& b);

struct VerifyReport {
  std::string metric;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
// {"metric", "measured", "tolerance", "pass"}
std::string verify_report_json(const VerifyReport& r);

// RFC 4180: fields holding comma, quote, CR, or LF are quoted with doubled
// quotes; rows end in CRLF
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace qamc
