// SPDX-License-Identifier: MIT

#include "qamc/pauli.hpp"

namespace qamc {

PauliString PauliString::parse(const std::string& s) {
  PauliString p;
  size_t i = 0;
  int sign = 0;  // quarter turns
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i < s.size() && s[i] == 'i') {
    sign = 1;
    ++i;
  }
  if (neg) sign += 2;
  p.phase_quarter = static_cast<uint8_t>(sign % 4);
  for (; i < s.size(); ++i) {
    switch (s[i]) {
      case 'I':
        p.letter.push_back(0);
        break;
      case 'X':
        p.letter.push_back(1);
        break;
      case 'Y':
        p.letter.push_back(2);
        break;
      case 'Z':
        p.letter.push_back(3);
        break;
      default:
        throw SchemaError(std::string("bad Pauli letter '") + s[i] + "' in '" +
                          s + "'");
    }
  }
  if (p.letter.empty())
    throw SchemaError("Pauli string '" + s + "' has no letters");
  p.n = static_cast<uint32_t>(p.letter.size());
  return p;
}

std::string PauliString::str() const {
  static const char* pre[4] = {"+", "+i", "-", "-i"};
  std::string out = pre[phase_quarter % 4];
  static const char names[4] = {'I', 'X', 'Y', 'Z'};
  for (auto l : letter) out.push_back(names[l]);
  return out;
}

bool PauliString::is_identity_letterwise() const {
  for (auto l : letter)
    if (l != 0) return false;
  return true;
}

void PauliString::symplectic(uint64_t& x_mask, uint64_t& z_mask,
                             uint8_t& kappa) const {
  if (n > 64) throw SchemaError("symplectic form limited to 64 letters");
  x_mask = z_mask = 0;
  unsigned k = phase_quarter;
  for (uint32_t l = 0; l < n; ++l) {
    if (letter[l] == 1 || letter[l] == 2) x_mask |= uint64_t{1} << l;
    if (letter[l] == 3 || letter[l] == 2) z_mask |= uint64_t{1} << l;
    if (letter[l] == 2) ++k;  // Y = i * X * Z
  }
  kappa = static_cast<uint8_t>(k % 4);
}

std::vector<cplx> PauliString::matrix() const {
  if (n > 12) throw CapError("Pauli matrix limited to 12 letters");
  const size_t dim = size_t{1} << n;
  std::vector<cplx> m(dim * dim, cplx{0, 0});
  static const cplx iunit{0, 1};
  cplx pre{1, 0};
  for (unsigned k = 0; k < phase_quarter % 4; ++k) pre *= iunit;
  // P|col> = pre * prod_l factor_l |col ^ flips>
  for (size_t col = 0; col < dim; ++col) {
    size_t row = col;
    cplx amp = pre;
    for (uint32_t l = 0; l < n; ++l) {
      const size_t bit = dim >> (l + 1);  // letter l acts on wire l (MSB first)
      const bool one = (col & bit) != 0;
      switch (letter[l]) {
        case 0:
          break;
        case 1:  // X
          row ^= bit;
          break;
        case 2:  // Y: |0> -> i|1>, |1> -> -i|0>
          row ^= bit;
          amp *= one ? -iunit : iunit;
          break;
        case 3:  // Z
          if (one) amp = -amp;
          break;
      }
    }
    m[row * dim + col] += amp;
  }
  return m;
}

}  // namespace qamc
