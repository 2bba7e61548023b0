// SPDX-License-Identifier: MIT

#include "qamc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qamc {

namespace {

GateKind dagger_of(GateKind k) {
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
      return k;  // H, X, Z, CNOT self-adjoint; rotations negate the angle
  }
}

const char* mnemonic(GateKind k) {
  switch (k) {
    case GateKind::H:
      return "H";
    case GateKind::S:
      return "S";
    case GateKind::Sdg:
      return "S+";
    case GateKind::T:
      return "T";
    case GateKind::Tdg:
      return "T+";
    case GateKind::X:
      return "X";
    case GateKind::Z:
      return "Z";
    case GateKind::Cnot:
      return "CNOT";
    case GateKind::Rz:
      return "RZ";
    case GateKind::Ry:
      return "RY";
  }
  return "?";
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

uint64_t rotation_t_weight(double eps, double c_rot) {
  if (!(eps > 0.0)) throw SchemaError("rotation accuracy must be positive");
  double w = std::ceil(c_rot * std::log2(1.0 / eps));
  if (w < 0.0) w = 0.0;
  return static_cast<uint64_t>(w);
}

void Circuit::add(const Gate& g) {
  auto check = [&](uint32_t w) {
    if (w >= n_total_)
      throw SchemaError("gate references wire " + std::to_string(w) +
                        " outside circuit of " + std::to_string(n_total_) +
                        " wires");
  };
  check(g.q0);
  if (g.kind == GateKind::Cnot) {
    check(g.q1);
    if (g.q0 == g.q1) throw SchemaError("CNOT control equals target");
  }
  if (is_rotation(g.kind) && !(g.eps > 0.0))
    throw SchemaError("abstract rotation requires a positive accuracy");
  gates_.push_back(g);
}

uint32_t Circuit::alloc_ancilla() {
  ++live_anc_;
  if (!free_list_.empty()) {
    uint32_t w = free_list_.back();
    free_list_.pop_back();
    return w;
  }
  return n_total_++;
}

std::vector<uint32_t> Circuit::alloc_ancillas(uint32_t k) {
  std::vector<uint32_t> ws(k);
  for (auto& w : ws) w = alloc_ancilla();
  return ws;
}

void Circuit::free_ancilla(uint32_t w) {
  if (w < n_data_ || w >= n_total_)
    throw SchemaError("release of a wire that is not a live ancilla");
  if (live_anc_ == 0) throw SchemaError("ancilla release without allocation");
  --live_anc_;
  free_list_.push_back(w);
}

void Circuit::free_ancillas(const std::vector<uint32_t>& ws) {
  for (auto it = ws.rbegin(); it != ws.rend(); ++it) free_ancilla(*it);
}

void Circuit::check_balanced() const {
  if (live_anc_ != 0)
    throw std::logic_error("ancilla ledger unbalanced: " +
                           std::to_string(live_anc_) + " wires still live");
}

void Circuit::set_register(const std::string& name,
                           std::vector<uint32_t> wires) {
  registers_[name] = std::move(wires);
}

Circuit Circuit::inverse() const {
  check_balanced();
  Circuit out(n_data_);
  out.n_total_ = n_total_;
  out.registers_ = registers_;
  out.budget_ = budget_;
  out.phase_ = std::conj(phase_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
    g.kind = dagger_of(g.kind);
    if (is_rotation(g.kind)) g.angle = -g.angle;
    out.gates_.push_back(g);
  }
  return out;
}

void Circuit::append(const Circuit& other, bool inverted) {
  if (other.n_data_ != n_data_)
    throw SchemaError("append requires matching data-register shape");
  other.check_balanced();
  n_total_ = std::max(n_total_, other.n_total_);
  if (!inverted) {
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    phase_ *= other.phase_;
  } else {
    for (auto it = other.gates_.rbegin(); it != other.gates_.rend(); ++it) {
      Gate g = *it;
      g.kind = dagger_of(g.kind);
      if (is_rotation(g.kind)) g.angle = -g.angle;
      gates_.push_back(g);
    }
    phase_ *= std::conj(other.phase_);
  }
  for (const auto& b : other.budget_) budget_.push_back(b);
}

Circuit Circuit::then(const Circuit& next) const {
  check_balanced();
  next.check_balanced();
  if (next.n_data_ != n_data_)
    throw SchemaError("composition requires matching data-register shape");
  Circuit out(n_data_);
  out.registers_ = registers_;
  for (const auto& [name, wires] : next.registers_) {
    auto it = out.registers_.find(name);
    if (it == out.registers_.end()) {
      out.registers_.emplace(name, wires);
    } else if (it->second != wires) {
      throw SchemaError("composition register mismatch for '" + name + "'");
    }
  }
  out.n_total_ = n_total_;
  out.gates_ = gates_;
  out.phase_ = phase_;
  out.budget_ = budget_;
  out.append(next);
  return out;
}

ResourceReport Circuit::metrics(const CostConfig& cfg) const {
  ResourceReport r;
  r.ancilla_peak = ancilla_peak();
  std::vector<uint64_t> busy_until(n_total_, 0);
  std::vector<std::pair<uint64_t, uint64_t>> t_intervals;

  for (const auto& g : gates_) {
    uint64_t w = 1;        // schedule weight of this gate
    uint64_t tc = 0;       // T gates contributed
    switch (g.kind) {
      case GateKind::X:
        w = 4;  // H S S H
        break;
      case GateKind::Z:
        w = 2;  // S S
        break;
      case GateKind::T:
      case GateKind::Tdg:
        tc = 1;
        break;
      case GateKind::Rz:
      case GateKind::Ry: {
        if (cfg.model == CostModel::Concrete)
          throw SchemaError(
              "concrete-cost metrics requested on a circuit that still "
              "contains abstract rotations; expand them first");
        tc = rotation_t_weight(g.eps, cfg.c_rot);
        w = std::max<uint64_t>(tc, 1);
        break;
      }
      default:
        break;
    }
    uint64_t start;
    if (g.kind == GateKind::Cnot) {
      start = std::max(busy_until[g.q0], busy_until[g.q1]);
      busy_until[g.q0] = busy_until[g.q1] = start + w;
    } else {
      start = busy_until[g.q0];
      busy_until[g.q0] = start + w;
    }
    r.count += w;
    r.t_count += tc;
    if (tc > 0) t_intervals.emplace_back(start, start + w);
  }
  r.depth = busy_until.empty()
                ? 0
                : *std::max_element(busy_until.begin(), busy_until.end());

  std::sort(t_intervals.begin(), t_intervals.end());
  uint64_t covered = 0, lo = 0, hi = 0;
  bool open = false;
  for (auto [a, b] : t_intervals) {
    if (!open) {
      lo = a;
      hi = b;
      open = true;
    } else if (a <= hi) {
      hi = std::max(hi, b);
    } else {
      covered += hi - lo;
      lo = a;
      hi = b;
    }
  }
  if (open) covered += hi - lo;
  r.t_depth = covered;
  return r;
}

void Circuit::to_text(std::ostream& os) const {
  os << "# data " << n_data_ << "\n";
  os << "# anc " << ancilla_peak() << "\n";
  if (phase_ != cplx{1.0, 0.0})
    os << "# phase " << fmt_double(phase_.real()) << ' '
       << fmt_double(phase_.imag()) << "\n";
  for (const auto& [name, wires] : registers_) {
    os << "# reg " << name;
    for (auto w : wires) os << ' ' << w;
    os << "\n";
  }
  for (const auto& g : gates_) {
    os << mnemonic(g.kind);
    if (is_rotation(g.kind))
      os << ' ' << fmt_double(g.angle) << ' ' << fmt_double(g.eps);
    os << " q" << g.q0;
    if (g.kind == GateKind::Cnot) os << " q" << g.q1;
    os << "\n";
  }
}

std::string Circuit::to_text() const {
  std::ostringstream os;
  to_text(os);
  return os.str();
}

Circuit Circuit::from_text(const std::string& s) {
  std::istringstream is(s);
  return from_text(is);
}

Circuit Circuit::from_text(std::istream& is) {
  Circuit c;
  bool have_data = false;
  uint32_t anc = 0;
  std::string line;
  size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw SchemaError("circuit text line " + std::to_string(lineno) + ": " +
                      why);
  };
  auto parse_wire = [&](const std::string& tok) -> uint32_t {
    if (tok.size() < 2 || tok[0] != 'q') fail("expected wire token, got '" + tok + "'");
    try {
      return static_cast<uint32_t>(std::stoul(tok.substr(1)));
    } catch (const std::exception&) {
      fail("bad wire token '" + tok + "'");
    }
    return 0;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank
    if (tok == "#") {
      std::string key;
      if (!(ls >> key)) continue;
      if (key == "data") {
        uint32_t n;
        if (!(ls >> n)) fail("bad data header");
        c.n_data_ = n;
        c.n_total_ = std::max(c.n_total_, n);
        have_data = true;
      } else if (key == "anc") {
        if (!(ls >> anc)) fail("bad anc header");
      } else if (key == "phase") {
        double re, im;
        if (!(ls >> re >> im)) fail("bad phase header");
        c.phase_ = {re, im};
      } else if (key == "reg") {
        std::string name;
        if (!(ls >> name)) fail("bad reg header");
        std::vector<uint32_t> ws;
        uint32_t w;
        while (ls >> w) ws.push_back(w);
        c.registers_[name] = std::move(ws);
      }
      // unknown comment lines are ignored
      continue;
    }
    Gate g{GateKind::H, 0};
    if (tok == "H") g.kind = GateKind::H;
    else if (tok == "S") g.kind = GateKind::S;
    else if (tok == "S+") g.kind = GateKind::Sdg;
    else if (tok == "T") g.kind = GateKind::T;
    else if (tok == "T+") g.kind = GateKind::Tdg;
    else if (tok == "X") g.kind = GateKind::X;
    else if (tok == "Z") g.kind = GateKind::Z;
    else if (tok == "CNOT") g.kind = GateKind::Cnot;
    else if (tok == "RZ") g.kind = GateKind::Rz;
    else if (tok == "RY") g.kind = GateKind::Ry;
    else fail("unknown gate '" + tok + "'");
    if (is_rotation(g.kind)) {
      if (!(ls >> g.angle >> g.eps)) fail("rotation needs angle and accuracy");
    }
    std::string wt;
    if (!(ls >> wt)) fail("missing wire");
    g.q0 = parse_wire(wt);
    if (g.kind == GateKind::Cnot) {
      if (!(ls >> wt)) fail("CNOT needs two wires");
      g.q1 = parse_wire(wt);
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
    uint32_t hi = std::max(g.q0, g.kind == GateKind::Cnot ? g.q1 : g.q0);
    c.n_total_ = std::max(c.n_total_, hi + 1);
    c.gates_.push_back(g);  // bypass add(): n_total_ grows as wires appear
  }
  if (!have_data) throw SchemaError("circuit text lacks '# data' header");
  c.n_total_ = std::max(c.n_total_, c.n_data_ + anc);
  for (const auto& g : c.gates_) {
    if (g.q0 >= c.n_total_ || (g.kind == GateKind::Cnot && g.q1 >= c.n_total_))
      throw SchemaError("circuit text references wire beyond declared width");
  }
  return c;
}

}  // namespace qamc
