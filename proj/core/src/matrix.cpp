#include "ietlab/matrix.hpp"

#include <stdexcept>

namespace ietlab {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& rhs) const {
  IntMatrix out(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < n_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  return out;
}

std::vector<Int> IntMatrix::mul_vec(const std::vector<Int>& v) const {
  std::vector<Int> out(n_, Int(0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

std::vector<Int> IntMatrix::column_sums() const {
  std::vector<Int> s(n_, Int(0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s[j] += at(i, j);
  return s;
}

int IntMatrix::cmax_index() const {
  auto s = column_sums();
  int best = 0;
  for (int j = 1; j < n_; ++j)
    if (s[j] > s[best]) best = j;
  return best;
}

Int IntMatrix::cmax() const { return column_sums()[cmax_index()]; }

Rational IntMatrix::balance() const {
  auto s = column_sums();
  Int lo = s[0], hi = s[0];
  for (const Int& v : s) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return Rational(hi, lo);
}

bool IntMatrix::positive() const {
  for (const Int& v : e_)
    if (v < 1) return false;
  return true;
}

Int IntMatrix::determinant() const {
  if (n_ == 0) return 1;
  // Bareiss fraction-free elimination with partial pivoting by sign swaps.
  IntMatrix a = *this;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n_; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n_; ++i)
        if (a.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n_; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n_; ++i)
      for (int j = k + 1; j < n_; ++j) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n_ - 1, n_ - 1) : Int(-a.at(n_ - 1, n_ - 1));
}

std::string IntMatrix::dump() const {
  std::string out;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j) out += ' ';
      out += at(i, j).get_str();
    }
    out += '\n';
  }
  return out;
}

}  // namespace ietlab
