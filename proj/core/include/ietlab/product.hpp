#pragma once

#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/rational.hpp"

namespace ietlab {

// (T x S)(x, y) = (Tx, Sy); the computable face of product ergodicity.
// claims: product-unique-ergodicity, projection-marginals
struct ProductSystem {
  Iet first;
  Iet second;
};

// [x_lo, x_hi) x [y_lo, y_hi) with rational corners.
struct Rectangle {
  Rational x_lo, x_hi, y_lo, y_hi;

  Rational area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

struct BirkhoffStats {
  Rectangle rect;
  long horizon = 0;
  std::vector<std::pair<Rational, Rational>> starts;
  std::vector<Rational> averages;  // exact visit frequency per start
  Rational target;                 // lambda(A) * lambda(B)
  Rational max_deviation;
};

// Per start (x,y): N^-1 #{0 <= k < N : (T^k x, S^k y) in rect}, counted
// exactly on the common denominator grid. No floating accumulation
// anywhere; the only rounding is the reader's.
BirkhoffStats product_orbit_average(
    const ProductSystem& p, const Rectangle& rect,
    const std::vector<std::pair<Rational, Rational>>& starts, long horizon,
    int threads = 0);

struct ProjectionStats {
  Rational target;  // lambda(A)
  std::vector<Rational> frequencies;
  Rational max_deviation;
};

// Marginal check: frequency of T^k x in [a_lo, a_hi) along product orbits.
ProjectionStats projection_check(
    const ProductSystem& p, const Rational& a_lo, const Rational& a_hi,
    long horizon, const std::vector<std::pair<Rational, Rational>>& starts);

}  // namespace ietlab
