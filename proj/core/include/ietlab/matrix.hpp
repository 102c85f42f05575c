#pragma once

#include <vector>

#include "ietlab/rational.hpp"

namespace ietlab {

// Small dense matrix of arbitrary-precision integers. Sized for induction
// matrices (d <= 8 or so); no attempt at being a general linear algebra type.
class IntMatrix {
 public:
  IntMatrix() : n_(0) {}
  explicit IntMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n, Int(0)) {}

  static IntMatrix identity(int n);

  int size() const { return n_; }
  Int& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
  const Int& at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

  IntMatrix mul(const IntMatrix& rhs) const;
  std::vector<Int> mul_vec(const std::vector<Int>& v) const;

  std::vector<Int> column_sums() const;
  // Index (0-based) of the column with the largest sum; ties go to the
  // smallest index so event logs are deterministic.
  int cmax_index() const;
  Int cmax() const;

  // max_{i,j} |C_i|/|C_j|; the matrix is nu-balanced iff this is < nu.
  Rational balance() const;

  bool positive() const;  // all entries >= 1

  // Exact determinant (Bareiss), used by invariants and tests.
  Int determinant() const;

  bool operator==(const IntMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }

  // Row-major decimal integers, whitespace-separated.
  std::string dump() const;

 private:
  int n_;
  std::vector<Int> e_;
};

}  // namespace ietlab
