#include <doctest.h>

#include "ietlab/errors.hpp"
#include "ietlab/rigidity.hpp"
#include "ietlab/rng.hpp"
#include "ietlab/sampling.hpp"
#include "ietlab/spectral.hpp"

using namespace ietlab;

namespace {

StepFunction half_indicator() { return StepFunction::centered_indicator(rat(1, 2)); }

Iet reversal_iet(Rng& rng, int d, int bits = 64) {
  std::vector<int> rev(d);
  for (int i = 0; i < d; ++i) rev[i] = d - i;
  return Iet::make(sample_simplex(rng, d, bits), Permutation(std::move(rev)));
}

}  // namespace

TEST_CASE("step function basics") {
  StepFunction f = half_indicator();
  CHECK(f.mean_zero());
  CHECK(f.mean() == 0);
  CHECK(f.norm_sq() == rat(1, 4));
  CHECK_THROWS(StepFunction::make({{rat(0), rat(1, 2), rat(1)}}));
}

TEST_CASE("correlation: worked rotations") {
  StepFunction f = half_indicator();
  CHECK(correlation(rotation(rat(1, 2)), f, 1) == rat(-1, 4));
  CHECK(correlation(rotation(rat(1, 3)), f, 1) == rat(-1, 12));
  CHECK(correlation(rotation(rat(1, 3)), f, 0) == rat(1, 4));
  Rng rng(73);
  Iet t = reversal_iet(rng, 3);
  CHECK(correlation(t, f, 0) == rat(1, 4));
}

TEST_CASE("rotation correlations follow the overlap closed form") {
  StepFunction f = half_indicator();
  Rng rng(79);
  for (int i = 0; i < 8; ++i) {
    Rational alpha = sample_point(rng, 24);
    if (alpha == 0 || alpha == rat(1, 2)) continue;
    Iet t = rotation(alpha);
    for (long n = 1; n <= 12; ++n) {
      Rational beta = frac_part(alpha * Rational(n));
      Rational d = beta <= rat(1, 2) ? beta : 1 - beta;
      // lambda(B intersect B - beta) = 1/2 - d for B = [0, 1/2).
      CHECK(correlation(t, f, n) == (rat(1, 2) - d) - rat(1, 4));
    }
  }
}

TEST_CASE("correlation series and Wiener averages") {
  StepFunction f = half_indicator();
  CorrelationSeries rot3 = CorrelationSeries::compute(rotation(rat(1, 3)), f, 12);
  CHECK(rot3.values()[0] == rat(1, 4));
  CHECK(rot3.values()[1] == rat(-1, 12));
  CHECK(rot3.values()[2] == rat(-1, 12));
  CHECK(rot3.values()[3] == rat(1, 4));
  for (unsigned long m : {3ul, 6ul, 12ul})
    CHECK(wiener_average(rot3, m) == rat(11, 432));
  CHECK(wiener_average(rot3, 1) == rat(1, 16));

  Iet id = Iet::make({rat(1, 2), rat(1, 2)}, Permutation({1, 2}));
  CorrelationSeries ids = CorrelationSeries::compute(id, f, 8);
  for (const Rational& c : ids.values()) CHECK(c == rat(1, 4));
  CHECK(wiener_average(ids, 8) == rat(1, 16));

  CHECK_THROWS_AS(wiener_average(rot3, 40), SeriesTooShort);
}

TEST_CASE("moment bound and inverse symmetry") {
  StepFunction f = half_indicator();
  Rng rng(83);
  for (int i = 0; i < 5; ++i) {
    Iet t = reversal_iet(rng, 3);
    CorrelationSeries s = CorrelationSeries::compute(t, f, 25);
    CorrelationSeries si = CorrelationSeries::compute(t.inverse(), f, 25);
    const Rational c0 = s.values()[0];
    for (unsigned long n = 0; n <= 25; ++n) {
      CHECK(abs(s.values()[n]) <= c0);
      CHECK(s.values()[n] == si.values()[n]);
    }
  }
}

TEST_CASE("low correlation sets") {
  StepFunction f = half_indicator();

  Iet id = Iet::make({rat(1, 2), rat(1, 2)}, Permutation({1, 2}));
  CorrelationSeries ids = CorrelationSeries::compute(id, f, 20);
  LowCorrelationSet empty = low_correlation_set(ids, rat(1, 4), 0);
  CHECK(empty.members.empty());
  CHECK(empty.density == 0);

  CorrelationSeries rot3 = CorrelationSeries::compute(rotation(rat(1, 3)), f, 30);
  // 1/12 > (1/4) c_0 = 1/16: even the off-cycle times fail at threshold 1/4.
  CHECK(low_correlation_set(rot3, rat(1, 4), 0).members.empty());
  // At threshold 1/2 the bound is 1/8 and the off-cycle times qualify.
  LowCorrelationSet half = low_correlation_set(rot3, rat(1, 2), 0);
  CHECK(half.density == rat(2, 3));
  for (long n : half.members) CHECK(n % 3 != 0);
  CHECK(half.predicate.contains(1));
  CHECK_FALSE(half.predicate.contains(3));

  CorrelationSeries tiny = CorrelationSeries::compute(rotation(rat(1, 3)), f, 1);
  CHECK_THROWS_AS(low_correlation_set(tiny, rat(1, 2), 2), SeriesTooShort);
}

TEST_CASE("continued fractions and rotation rigidity") {
  ContinuedFraction cf = ContinuedFraction::of(rat(5, 8));
  CHECK(cf.quotients == std::vector<Int>{0, 1, 1, 1, 2});
  CHECK(cf.q == std::vector<Int>{1, 1, 2, 3, 8});
  CHECK(cf.p.back() == 5);

  auto times = rotation_rigidity(rat(5, 8), 6);
  CHECK(times == std::vector<Int>{1, 2, 3, 8, 16, 24});
  CHECK(rigidity_defect(rotation(rat(5, 8)), 8) == 0);
  CHECK(rigidity_defect(rotation(rat(5, 8)), 16) == 0);

  // Convergent denominators are genuinely good rigidity times.
  Rational alpha(377, 987);  // F_14 / F_16, coprime? gcd(377,987)=29... use canonical
  alpha.canonicalize();
  ContinuedFraction cf2 = ContinuedFraction::of(alpha);
  for (size_t k = 2; k + 1 < cf2.q.size(); ++k) {
    unsigned long qk = cf2.q[k].get_ui();
    CHECK(rigidity_defect(rotation(alpha), qk) < Rational(2, cf2.q[k + 1]));
  }
}

TEST_CASE("avoidance sets exclude rotation rigidity times") {
  DensityPredicate avoid = avoidance_set(rat(5, 8), rat(1, 8));
  CHECK_FALSE(avoid.contains(8));
  CHECK_FALSE(avoid.contains(24));
  for (long n = 1; n <= 64; ++n)
    CHECK(avoid.contains(n) ==
          (circle_norm(rat(5, 8) * Rational(n)) >= rat(1, 8)));
  // Density cost is of order delta.
  CHECK(avoid.empirical_density(1000) >= rat(3, 4));
}

TEST_CASE("witness search: identity target yields nothing") {
  Iet id = Iet::make({rat(1, 2), rat(1, 2)}, Permutation({1, 2}));
  RauzyClass cls = RauzyClass::of(Permutation({3, 2, 1}));
  WitnessSearchResult res =
      disjointness_witness(id, half_indicator(), rat(1, 10), 1, cls, 64, 7,
                           20, Int(1) << 10);
  CHECK(res.witnesses.empty());
  CHECK(res.samples_used == 20);
}

TEST_CASE("witnesses revalidate from scratch") {
  Rng rng(89);
  Iet target = reversal_iet(rng, 4, 96);
  RauzyClass cls = RauzyClass::of(Permutation({3, 2, 1}));
  StepFunction f = half_indicator();
  WitnessSearchResult res = disjointness_witness(
      target, f, rat(3, 10), 1, cls, 96, 97, 150, Int(1) << 11);
  const Rational bound = rat(3, 10) * f.norm_sq();
  for (const DisjointnessWitness& w : res.witnesses) {
    unsigned long m = w.time.get_ui();
    CHECK(rigidity_defect(w.s, m) == w.defect);
    CHECK(w.defect < rat(3, 10));
    Rational worst = 0;
    for (long k = -1; k <= 1; ++k) {
      Rational c = abs(correlation(target, f, m + k));
      if (c > worst) worst = c;
    }
    CHECK(worst == w.max_correlation);
    CHECK(worst < bound);
  }
}
