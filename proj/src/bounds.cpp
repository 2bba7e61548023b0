// SPDX-License-Identifier: MIT

#include "qamc/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace qamc {

namespace {

void check_n(uint32_t n) {
  if (n < 1) throw SchemaError("qubit count must be at least 1");
}

void check_g(uint32_t g) {
  if (g < 1) throw SchemaError("gate-set size must be at least 1");
}

// bits contributed by gate j when at most `live` wires are in play:
// live·(live-1) ordered pairs, live single-wire choices doubled by the
// option of consuming a fresh ancilla, plus two pure ancilla moves,
// times g labels
double gate_bits(double live, double log2_g) {
  return std::log2(live * (live - 1.0) + 2.0 * live + 2.0) + log2_g;
}

// smallest C with capacity_log_gates >= target
uint64_t scan_min_count(uint32_t n, uint32_t g, double target) {
  const double log2_g = std::log2(static_cast<double>(g));
  double bits = 0.0;
  uint64_t c = 0;
  while (bits < target) {
    const double live = static_cast<double>(n) + 2.0 * static_cast<double>(c);
    bits += gate_bits(live, log2_g);
    ++c;
  }
  return std::max<uint64_t>(c, 1);
}

// smallest (n+n_anc)·D with capacity_log_depth >= target; the capacity per
// layer is 2·log2(tot) + (tot/2)·log2(g), so for each even width tot the
// best depth is the smallest D covering the target, and widths beyond the
// best product so far cannot win because the product is at least tot·1
uint64_t scan_min_space_time(uint32_t n, uint32_t g, double target) {
  const double log2_g = std::log2(static_cast<double>(g));
  uint64_t tot = std::max<uint32_t>(n, 2);
  if (tot % 2 != 0) ++tot;
  uint64_t best = 0;
  for (; best == 0 || tot <= best; tot += 2) {
    const double per_layer =
        2.0 * std::log2(static_cast<double>(tot)) +
        static_cast<double>(tot) / 2.0 * log2_g;
    const uint64_t d =
        std::max<uint64_t>(static_cast<uint64_t>(std::ceil(target / per_layer)), 1);
    best = best == 0 ? tot * d : std::min(best, tot * d);
  }
  return best;
}

LowerBound scan(uint32_t n, uint32_t g, double target) {
  LowerBound b;
  b.target_bits = target;
  b.min_count = scan_min_count(n, g, target);
  b.min_space_time = scan_min_space_time(n, g, target);
  return b;
}

}  // namespace

void CapacityQuery::validate() const {
  if (g < 1) throw SchemaError("gate-set size must be at least 1");
  const bool gate_budget = c.has_value();
  const bool depth_budget = n_anc.has_value() && d.has_value();
  if (gate_budget == depth_budget)
    throw SchemaError("supply either a gate budget or an ancilla and depth budget");
  if (n_anc.has_value() != d.has_value())
    throw SchemaError("ancilla and depth budgets come together");
}

double capacity_log_gates(const CapacityQuery& q) {
  q.validate();
  if (!q.c) throw SchemaError("gate-count capacity needs a gate budget");
  if (*q.c < 1) throw SchemaError("gate budget must be at least 1");
  const double log2_g = std::log2(static_cast<double>(q.g));
  double bits = 0.0;
  for (uint64_t j = 0; j < *q.c; ++j) {
    const double live = static_cast<double>(q.n) + 2.0 * static_cast<double>(j);
    bits += gate_bits(live, log2_g);
  }
  return bits;
}

DepthCapacity capacity_log_depth(const CapacityQuery& q) {
  q.validate();
  if (!q.n_anc || !q.d)
    throw SchemaError("depth capacity needs an ancilla and depth budget");
  if (*q.d < 1) throw SchemaError("depth budget must be at least 1");
  DepthCapacity out;
  uint64_t tot = static_cast<uint64_t>(q.n) + *q.n_anc;
  if (tot < 1) throw SchemaError("qubit count must be at least 1");
  if (tot % 2 != 0) {
    ++tot;
    out.padded = true;
  }
  const double d = static_cast<double>(*q.d);
  const double t = static_cast<double>(tot);
  out.bits = 2.0 * d * std::log2(t) +
             t * d / 2.0 * std::log2(static_cast<double>(q.g));
  return out;
}

double log2_factorial(uint64_t n) {
  double bits = 0.0;
  for (uint64_t k = 2; k <= n; ++k) bits += std::log2(static_cast<double>(k));
  return bits;
}

LowerBound saim_lower_bound(uint32_t n, uint32_t g) {
  check_n(n);
  check_g(g);
  return scan(n, g, log2_factorial(uint64_t{1} << n));
}

LowerBound sparse_be_lower_bound(uint32_t n, uint32_t g) {
  check_n(n);
  check_g(g);
  return scan(n, g, static_cast<double>(uint64_t{1} << n));
}

LowerBound stateprep_lower_bound(uint32_t n, double eps, uint32_t g) {
  check_n(n);
  check_g(g);
  if (!(eps > 0.0) || !(eps < 1.0))
    throw SchemaError("accuracy must lie in (0, 1)");
  const double target =
      static_cast<double>(uint64_t{1} << (n + 1)) * std::log2(1.0 / eps);
  return scan(n, g, target);
}

}  // namespace qamc
