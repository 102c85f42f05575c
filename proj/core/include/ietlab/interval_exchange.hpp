#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ietlab/permutation.hpp"
#include "ietlab/rational.hpp"

namespace ietlab {

struct KeaneResult {
  bool ok = true;
  // First violation T^n(b_i) == b_j, reported with 1-based discontinuity
  // indices; meaningful only when ok is false.
  int n = 0, i = 0, j = 0;
};

// Interval exchange transformation (L, pi) on [0,1): d subintervals of
// prescribed rational lengths, exchanged by pi.
// claims: iet-evaluation, keane-condition
class Iet {
 public:
  // Validates d >= 2, nonnegative lengths, exact unit sum. Zero lengths are
  // accepted here (the closed simplex) but rejected by every dynamical
  // operation.
  static Iet make(std::vector<Rational> lengths, Permutation perm);

  int order() const { return static_cast<int>(lengths_.size()); }
  const std::vector<Rational>& lengths() const { return lengths_; }
  const Permutation& perm() const { return perm_; }

  // b_0 = 0 < b_1 < ... < b_d = 1 (nondecreasing when zero lengths present).
  const std::vector<Rational>& breakpoints() const { return breaks_; }

  // Translation applied on I_j (1-based j).
  const Rational& shift(int j) const { return shifts_[j - 1]; }

  bool degenerate() const;  // some length is zero

  // T(x) by the defining displacement formula; throws OutOfDomain unless
  // 0 <= x < 1.
  Rational eval(const Rational& x) const;

  // Exact inverse; S(T(x)) = x everywhere. Throws DegenerateLength.
  Iet inverse() const;

  // Checks T^n(b_i) != b_j for 1 <= n <= depth over the genuine
  // discontinuities of T. A failure is a Keane-condition violation and
  // means induction stops within `depth` steps.
  KeaneResult keane_check(int depth) const;

  // Text format "l1/m1,l2/m2,...;p1 p2 ... pd"; round-trips exactly.
  static Iet parse(const std::string& text);
  std::string format() const;

  bool operator==(const Iet& o) const {
    return lengths_ == o.lengths_ && perm_ == o.perm_;
  }

 private:
  Iet(std::vector<Rational> lengths, Permutation perm);

  std::vector<Rational> lengths_;
  Permutation perm_;
  std::vector<Rational> breaks_;  // size d+1
  std::vector<Rational> shifts_;  // size d
};

// Convenience: the rotation x -> x + alpha (mod 1) as the 2-IET
// ((1-alpha, alpha), (2 1)). Requires 0 < alpha < 1.
Iet rotation(const Rational& alpha);

}  // namespace ietlab
