#pragma once

#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/rational.hpp"

namespace ietlab {

// Piecewise translation with every endpoint and shift an integer multiple of
// 1/denom. All compositions of an IET with rational data live on the fixed
// grid of its length denominators, so composing and evaluating powers needs
// no gcd work at all; this is the hot path under every defect, correlation
// and orbit computation.
//
// Pieces are kept sorted, contiguous on [0, denom), and canonical: adjacent
// pieces with equal shift are merged, so two grids over the same denominator
// are equal as functions iff their piece lists are equal.
class PiecewiseGrid {
 public:
  struct Piece {
    Int left, right, shift;
    bool operator==(const Piece& o) const = default;
  };

  static PiecewiseGrid identity(Int denom);
  // Requires all lengths positive (DegenerateLength otherwise).
  static PiecewiseGrid from_iet(const Iet& t);
  // Pieces must be sorted and contiguously cover [0, denom); adjacent
  // equal-shift pieces are merged.
  static PiecewiseGrid make(Int denom, std::vector<Piece> pieces);

  const Int& denom() const { return denom_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  size_t piece_count() const { return pieces_.size(); }

  // x -> next(this(x)); both operands must share the denominator.
  PiecewiseGrid then(const PiecewiseGrid& next) const;

  // n-fold self-composition by repeated squaring.
  PiecewiseGrid power(unsigned long n) const;

  Int eval(const Int& x) const;

  // Integral of |f(x) - x| over [0,1): sum of length * |shift| / denom^2.
  Rational displacement_integral() const;

  // Image intervals partition [0, denom) exactly.
  bool preserves_measure() const;

  // Re-express on a finer grid; new_denom must be a multiple of denom.
  PiecewiseGrid rescale(const Int& new_denom) const;

  bool operator==(const PiecewiseGrid& o) const = default;

 private:
  Int denom_;
  std::vector<Piece> pieces_;
};

// Exact piecewise translation over [0,1) with rational pieces; the public
// face of T^n.
// claims: power-piecewise-structure
class PiecewiseTranslation {
 public:
  struct Piece {
    Rational left, right, shift;
    bool operator==(const Piece& o) const = default;
  };

  // Validates: sorted, contiguous cover of [0,1), images inside [0,1),
  // image intervals partition [0,1) exactly.
  static PiecewiseTranslation make(std::vector<Piece> pieces);
  static PiecewiseTranslation identity();
  static PiecewiseTranslation from_grid(const PiecewiseGrid& g);

  const std::vector<Piece>& pieces() const { return pieces_; }
  size_t piece_count() const { return pieces_.size(); }

  Rational eval(const Rational& x) const;

  // Refinement-composition x -> next(this(x)).
  PiecewiseTranslation then(const PiecewiseTranslation& next) const;

  PiecewiseGrid to_grid() const;

  bool operator==(const PiecewiseTranslation& o) const = default;

 private:
  std::vector<Piece> pieces_;
};

// Exact representation of T^n. n = 0 gives the identity; T needs all
// lengths positive. Piece count is at most n(d-1)+1. Small powers are
// built by stepwise refinement, large ones by repeated squaring; the two
// agree piece-for-piece (both canonicalize), which the tests pin down.
PiecewiseTranslation to_piecewise(const Iet& t, unsigned long n);

// Common denominator of an IET's lengths (lcm).
Int iet_denominator(const Iet& t);

}  // namespace ietlab
