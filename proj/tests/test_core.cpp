#include <doctest.h>

#include "ietlab/errors.hpp"
#include "ietlab/interval_exchange.hpp"
#include "ietlab/piecewise.hpp"
#include "ietlab/rng.hpp"
#include "ietlab/sampling.hpp"

using namespace ietlab;

namespace {

Iet random_iet(Rng& rng, int d, int bits = 64) {
  return Iet::make(sample_simplex(rng, d, bits), Permutation::identity(d));
}

Iet random_irreducible(Rng& rng, int d, int bits = 64) {
  // Reversal permutation is irreducible for every d.
  std::vector<int> rev(d);
  for (int i = 0; i < d; ++i) rev[i] = d - i;
  return Iet::make(sample_simplex(rng, d, bits), Permutation(std::move(rev)));
}

}  // namespace

TEST_CASE("make_iet validates its input") {
  CHECK_NOTHROW(Iet::make({rat(1, 3), rat(2, 3)}, Permutation({2, 1})));
  // Identity data is legal; the map is the identity.
  Iet id = Iet::make({rat(1, 2), rat(1, 2)}, Permutation({1, 2}));
  CHECK(id.eval(rat(1, 3)) == rat(1, 3));

  CHECK_THROWS_AS(Iet::make({rat(1, 3), rat(1, 3), rat(1, 2)},
                            Permutation({3, 2, 1})),
                  NonUnitSum);
  CHECK_THROWS_AS(Iet::make({rat(-1, 3), rat(4, 3)}, Permutation({2, 1})),
                  NegativeLength);
  CHECK_THROWS_AS(Permutation({1, 1}), NotAPermutation);
  CHECK_THROWS_AS(Permutation({0, 2}), NotAPermutation);
  // Zero length is legal at the type level.
  CHECK_NOTHROW(Iet::make({rat(0), rat(1)}, Permutation({2, 1})));
}

TEST_CASE("irreducibility flag") {
  CHECK(Permutation({2, 1}).irreducible());
  CHECK(Permutation({3, 2, 1}).irreducible());
  CHECK_FALSE(Permutation({1, 2}).irreducible());
  CHECK_FALSE(Permutation({2, 1, 3}).irreducible());
  CHECK_FALSE(Permutation({1, 3, 2}).irreducible());
}

TEST_CASE("eval follows the displacement formula") {
  Iet t = Iet::make({rat(1, 3), rat(2, 3)}, Permutation({2, 1}));
  CHECK(t.eval(rat(0)) == rat(2, 3));
  CHECK(t.eval(rat(1, 2)) == rat(1, 6));
  CHECK_THROWS_AS(t.eval(rat(-1, 2)), OutOfDomain);
  CHECK_THROWS_AS(t.eval(rat(1)), OutOfDomain);
}

TEST_CASE("rotation helper is the +alpha map") {
  Iet r = rotation(rat(2, 3));
  CHECK(r.eval(rat(0)) == rat(2, 3));
  CHECK(r.eval(rat(1, 2)) == rat(1, 6));
  CHECK(r.eval(rat(5, 6)) == rat(1, 2));
}

TEST_CASE("to_piecewise basics") {
  Iet r = rotation(rat(2, 3));
  PiecewiseTranslation p0 = to_piecewise(r, 0);
  REQUIRE(p0.piece_count() == 1);
  CHECK(p0.pieces()[0].shift == 0);

  PiecewiseTranslation p1 = to_piecewise(r, 1);
  REQUIRE(p1.piece_count() == 2);
  CHECK(p1.pieces()[0].left == 0);
  CHECK(p1.pieces()[0].right == rat(1, 3));
  CHECK(p1.pieces()[0].shift == rat(2, 3));
  CHECK(p1.pieces()[1].shift == rat(-1, 3));

  // T^3 = id: 3 * (2/3) = 2.
  PiecewiseTranslation p3 = to_piecewise(r, 3);
  REQUIRE(p3.piece_count() == 1);
  CHECK(p3.pieces()[0].shift == 0);
}

TEST_CASE("invert") {
  Iet id = Iet::make({rat(1, 2), rat(1, 2)}, Permutation({1, 2}));
  CHECK(id.inverse() == id);

  Iet r = rotation(rat(2, 3));
  Iet s = r.inverse();
  CHECK(s.lengths() == std::vector<Rational>{rat(2, 3), rat(1, 3)});
  CHECK(s.perm() == Permutation({2, 1}));
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    Rational x = sample_point(rng, 48);
    CHECK(s.eval(r.eval(x)) == x);
  }

  Iet t = Iet::make({rat(1, 6), rat(1, 3), rat(1, 2)}, Permutation({3, 1, 2}));
  Iet u = t.inverse();
  CHECK(u.perm() == Permutation({2, 3, 1}));
  for (int i = 0; i < 10; ++i) {
    Rational x = sample_point(rng, 48);
    CHECK(u.eval(t.eval(x)) == x);
  }

  CHECK_THROWS_AS(Iet::make({rat(0), rat(1)}, Permutation({2, 1})).inverse(),
                  DegenerateLength);
}

TEST_CASE("keane_check") {
  KeaneResult bad = rotation(rat(1, 2)).keane_check(2);
  CHECK_FALSE(bad.ok);
  CHECK(bad.n == 2);

  // Rational rotations are periodic: a violation within q steps.
  CHECK_FALSE(rotation(rat(3, 7)).keane_check(7).ok);
  CHECK_FALSE(rotation(rat(2, 5)).keane_check(5).ok);

  Rng rng(11);
  for (int i = 0; i < 5; ++i) {
    Iet t = random_irreducible(rng, 3, 128);
    CHECK(t.keane_check(50).ok);
  }
}

TEST_CASE("text format round-trips exactly") {
  Iet t = Iet::make({rat(1, 6), rat(1, 3), rat(1, 2)}, Permutation({3, 1, 2}));
  CHECK(Iet::parse(t.format()) == t);
  CHECK(t.format() == "1/6,1/3,1/2;3 1 2");
  CHECK(Iet::parse("1/3,2/3;2 1") == rotation(rat(2, 3)));
  CHECK_THROWS_AS(Iet::parse("1/3,2/3"), ParseError);
}

TEST_CASE("measure preservation and piece bound on random samples") {
  Rng rng(23);
  for (int i = 0; i < 25; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = random_irreducible(rng, d, 96);
    PiecewiseGrid g = PiecewiseGrid::from_iet(t);
    CHECK(g.preserves_measure());
    unsigned long n = 1 + rng.below(30);
    PiecewiseGrid p = g.power(n);
    CHECK(p.preserves_measure());
    CHECK(p.piece_count() <= n * (d - 1) + 1);
  }
}

TEST_CASE("group law: power(m+n) equals refinement composition") {
  Rng rng(29);
  for (int i = 0; i < 15; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = random_irreducible(rng, d, 64);
    unsigned long m = 1 + rng.below(10), n = 1 + rng.below(10);
    PiecewiseGrid g = PiecewiseGrid::from_iet(t);
    PiecewiseGrid lhs = g.power(m + n);
    PiecewiseGrid rhs = g.power(m).then(g.power(n));
    CHECK(lhs == rhs);
    // Functional equality probed at piece midpoints, as an independent take.
    for (const auto& piece : lhs.pieces()) {
      Int mid = piece.left + (piece.right - piece.left) / 2;
      CHECK(lhs.eval(mid) == rhs.eval(mid));
    }
  }
}

TEST_CASE("inverse law via piecewise evaluation") {
  Rng rng(31);
  for (int i = 0; i < 15; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = random_irreducible(rng, d, 64);
    Iet s = t.inverse();
    for (int k = 0; k < 5; ++k) {
      Rational x = sample_point(rng, 48);
      CHECK(s.eval(t.eval(x)) == x);
      CHECK(t.eval(s.eval(x)) == x);
    }
  }
}

TEST_CASE("stepwise refinement equals repeated squaring") {
  Rng rng(37);
  for (int i = 0; i < 8; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = random_irreducible(rng, d, 64);
    PiecewiseGrid g = PiecewiseGrid::from_iet(t);
    PiecewiseGrid stepwise = g;
    for (unsigned long n = 2; n <= 40; ++n) {
      stepwise = stepwise.then(g);
      if (n % 7 == 0) CHECK(stepwise == g.power(n));
    }
    // The public entry point switches strategy at 64.
    CHECK(to_piecewise(t, 63) == to_piecewise(t, 63));
    CHECK(to_piecewise(t, 70).to_grid() == g.power(70));
  }
}

TEST_CASE("piecewise translation validation") {
  using P = PiecewiseTranslation::Piece;
  CHECK_THROWS(PiecewiseTranslation::make({P{rat(0), rat(1, 2), rat(0)}}));
  CHECK_THROWS(PiecewiseTranslation::make(
      {P{rat(0), rat(1, 2), rat(3, 4)}, P{rat(1, 2), rat(1), rat(0)}}));
  // Overlapping images: both halves shifted onto [0,1/2).
  CHECK_THROWS(PiecewiseTranslation::make(
      {P{rat(0), rat(1, 2), rat(0)}, P{rat(1, 2), rat(1), rat(-1, 2)}}));
  CHECK_NOTHROW(PiecewiseTranslation::make(
      {P{rat(0), rat(1, 2), rat(1, 2)}, P{rat(1, 2), rat(1), rat(-1, 2)}}));
}
