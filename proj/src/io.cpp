// SPDX-License-Identifier: MIT

#include "qamc/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qamc {

namespace {

using nlohmann::ordered_json;

ordered_json parse(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("malformed JSON document");
  return j;
}

const ordered_json& field(const ordered_json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw SchemaError(std::string("missing field '") + name + "'");
  return j.at(name);
}

uint64_t u64_field(const ordered_json& j, const char* name) {
  const ordered_json& v = field(j, name);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw SchemaError(std::string("field '") + name +
                      "' must be a nonnegative integer");
  if (v.is_number_integer() && v.get<int64_t>() < 0)
    throw SchemaError(std::string("field '") + name +
                      "' must be a nonnegative integer");
  return v.get<uint64_t>();
}

uint32_t u32_field(const ordered_json& j, const char* name) {
  const uint64_t v = u64_field(j, name);
  if (v > UINT32_MAX)
    throw SchemaError(std::string("field '") + name + "' is out of range");
  return static_cast<uint32_t>(v);
}

double num_field(const ordered_json& j, const char* name) {
  const ordered_json& v = field(j, name);
  if (!v.is_number())
    throw SchemaError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

const ordered_json& array_field(const ordered_json& j, const char* name) {
  const ordered_json& v = field(j, name);
  if (!v.is_array())
    throw SchemaError(std::string("field '") + name + "' must be an array");
  return v;
}

cplx pair_to_cplx(const ordered_json& v, const char* name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(std::string("field '") + name +
                      "' must be a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

ordered_json json_of(const ResourceReport& r) {
  ordered_json j;
  j["count"] = r.count;
  j["t_count"] = r.t_count;
  j["depth"] = r.depth;
  j["t_depth"] = r.t_depth;
  j["ancilla_peak"] = r.ancilla_peak;
  return j;
}

}  // namespace

AmplitudeVector read_state_json(const std::string& text) {
  const ordered_json j = parse(text);
  const uint32_t n = u32_field(j, "n");
  const bool has_dense = j.is_object() && j.contains("dense");
  const bool has_sparse = j.is_object() && j.contains("sparse");
  if (has_dense == has_sparse)
    throw SchemaError("state needs exactly one of 'dense' or 'sparse'");
  if (has_dense) {
    std::vector<cplx> amps;
    for (const auto& v : array_field(j, "dense"))
      amps.push_back(pair_to_cplx(v, "dense"));
    return AmplitudeVector::make_dense(n, std::move(amps));
  }
  std::vector<SparseAmplitude> entries;
  for (const auto& v : array_field(j, "sparse"))
    entries.push_back(
        {u64_field(v, "index"), {num_field(v, "re"), num_field(v, "im")}});
  return AmplitudeVector::make_sparse(n, std::move(entries));
}

PauliSelectSpec read_pauli_select_json(const std::string& text) {
  const ordered_json j = parse(text);
  PauliSelectSpec spec;
  spec.m = u32_field(j, "m");
  spec.l = u32_field(j, "L");
  for (const auto& v : array_field(j, "strings")) {
    if (!v.is_string()) throw SchemaError("pauli strings must be strings");
    spec.strings.push_back(PauliString::parse(v.get<std::string>()));
  }
  return spec;
}

SbmSpec read_sbm_json(const std::string& text) {
  const ordered_json j = parse(text);
  SbmSpec spec;
  spec.n = u32_field(j, "n");
  spec.word_bits = u32_field(j, "word_bits");
  for (const auto& v : array_field(j, "entries"))
    spec.entries.push_back({u64_field(v, "q"), u64_field(v, "b")});
  return spec;
}

IntMatrix read_int_matrix_json(const std::string& text) {
  const ordered_json j = parse(text);
  IntMatrix a;
  a.n = u32_field(j, "n");
  a.d = u32_field(j, "d");
  a.s = u32_field(j, "s");
  for (const auto& v : array_field(j, "entries"))
    a.entries.push_back(
        {u64_field(v, "row"), u64_field(v, "col"), u64_field(v, "val")});
  return a;
}

LcuSpec read_lcu_json(const std::string& text) {
  const ordered_json j = parse(text);
  LcuSpec spec;
  spec.n = u32_field(j, "n");
  for (const auto& v : array_field(j, "terms")) {
    const cplx coeff = pair_to_cplx(field(v, "coeff"), "coeff");
    if (!field(v, "pauli").is_string())
      throw SchemaError("field 'pauli' must be a string");
    spec.terms.push_back(
        {coeff, PauliString::parse(field(v, "pauli").get<std::string>())});
  }
  return spec;
}

SparseMatrixCOO read_sparse_matrix_json(const std::string& text) {
  const ordered_json j = parse(text);
  SparseMatrixCOO a;
  a.n = u32_field(j, "n");
  for (const auto& v : array_field(j, "entries"))
    a.entries.push_back({u64_field(v, "row"), u64_field(v, "col"),
                         {num_field(v, "re"), num_field(v, "im")}});
  return a;
}

std::string metrics_json(const ResourceReport& r) {
  return json_of(r).dump(2) + "\n";
}

std::string be_report_json(const BlockEncodingReport& r) {
  ordered_json j;
  j["alpha"] = r.alpha;
  j["n_anc"] = r.n_anc;
  j["eps_requested"] = r.eps_requested;
  if (std::isnan(r.eps_measured))
    j["eps_measured"] = nullptr;
  else
    j["eps_measured"] = r.eps_measured;
  j["resource"] = json_of(r.resource);
  return j.dump(2) + "\n";
}

std::string bound_json(const LowerBound& b) {
  ordered_json j;
  j["target_bits"] = b.target_bits;
  j["min_count"] = b.min_count;
  j["min_space_time"] = b.min_space_time;
  return j.dump(2) + "\n";
}

std::string verify_report_json(const VerifyReport& r) {
  ordered_json j;
  j["metric"] = r.metric;
  j["measured"] = r.measured;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string csv_field(std::string_view s) {
  const bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write file: " + path);
  out << content;
}

}  // namespace qamc
