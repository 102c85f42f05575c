#pragma once

#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/piecewise.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/rauzy.hpp"
#include "ietlab/rigidity.hpp"

namespace ietlab {

// Real step function on [0,1): constant rational values on a rational
// partition. These are the test functions for all correlation work.
class StepFunction {
 public:
  struct Cell {
    Rational left, right, value;
  };

  static StepFunction make(std::vector<Cell> cells);
  // 1_[0,b) - b: the canonical mean-zero indicator.
  static StepFunction centered_indicator(const Rational& b);

  const std::vector<Cell>& cells() const { return cells_; }
  bool mean_zero() const { return mean_zero_; }
  Rational mean() const;
  Rational norm_sq() const;  // integral of f^2 = c_0

 private:
  std::vector<Cell> cells_;
  bool mean_zero_ = false;
};

// c_n = <f, f o T^n>, exactly: sum over cell pairs of v_i v_j
// lambda(B_i intersect T^-n B_j). The sequence is the moment sequence of
// the spectral measure of f; it is all the library ever needs of it.
// claims: spectral-moments
Rational correlation(const Iet& t, const StepFunction& f, unsigned long n);

// c_0..c_N computed incrementally on a common grid.
class CorrelationSeries {
 public:
  static CorrelationSeries compute(const Iet& t, const StepFunction& f,
                                   unsigned long max_n);

  const Iet& subject() const { return subject_; }
  const StepFunction& function() const { return f_; }
  const std::vector<Rational>& values() const { return values_; }
  // c_k with the real-series symmetry c_{-k} = c_k.
  const Rational& c(long k) const;
  unsigned long max_index() const { return values_.size() - 1; }

 private:
  Iet subject_ = rotation(Rational(1, 2));
  StepFunction f_;
  std::vector<Rational> values_;
};

// N^-1 sum_{k<N} c_k^2, exact. Tends to 0 iff the spectral measure is
// continuous; stays put for periodic systems.
// claims: wiener-dichotomy
Rational wiener_average(const CorrelationSeries& series, unsigned long n);

struct LowCorrelationSet {
  DensityPredicate predicate;
  long horizon = 0;                  // membership decided for 1..horizon
  std::vector<long> members;
  Rational density;                  // |members| / horizon
};

// {n <= horizon : |c_{n+k}| < threshold * c_0 for all |k| <= k_range} as an
// explicit-complement predicate. Throws SeriesTooShort when the series
// cannot support any n.
// claims: density-one-low-correlation
LowCorrelationSet low_correlation_set(const CorrelationSeries& series,
                                      const Rational& threshold, long k_range);

// claims: rotation-rigidity-avoidance
struct ContinuedFraction {
  std::vector<Int> quotients;  // a_0; a_1, a_2, ...
  std::vector<Int> p, q;       // convergents p_k / q_k

  static ContinuedFraction of(const Rational& x);
};

// Rigidity times of the rotation by alpha: the convergent denominators,
// extended by multiples of the exact period once alpha's expansion
// terminates. Increasing, deduplicated, `count` entries.
// claims: rotation-rigidity-avoidance
std::vector<Int> rotation_rigidity(const Rational& alpha, int count);

// {n : ||n alpha|| >= delta}: misses every rigidity time of the rotation
// with defect below ~2 delta, yet keeps density >= 1 - O(delta).
// claims: rotation-rigidity-avoidance
DensityPredicate avoidance_set(const Rational& alpha, const Rational& delta);

// One validated instance of the singularity mechanism: a sampled S whose
// expected rigidity time lands where the target's correlations are small.
struct DisjointnessWitness {
  long sample_index = 0;
  Iet s = rotation(Rational(1, 2));
  long step = 0;
  Int time;                 // m = |C_max|
  Rational defect;          // exact, < threshold
  Rational max_correlation; // max |c_{m+k}(T,f)| over |k| <= k_range
};

struct WitnessSearchResult {
  std::vector<DisjointnessWitness> witnesses;
  long samples_used = 0;
  long candidates = 0;       // expected-rigidity times examined
  bool budget_exhausted = false;
};

// Scans `budget` sampled IETs from the class for expected threshold-rigidity
// times m below norm_cap, keeps those with exact defect < threshold and
// |c_{m+k}(target)| < threshold * c_0 for |k| <= k_range. stop_after > 0
// ends the search early once that many witnesses are validated; the result
// is flagged budget_exhausted when the budget ran out first.
// claims: singularity-mechanism, density-one-low-correlation
WitnessSearchResult disjointness_witness(const Iet& target,
                                         const StepFunction& f,
                                         const Rational& threshold,
                                         int k_range, const RauzyClass& cls,
                                         int denom_bits, std::uint64_t seed,
                                         long budget, const Int& norm_cap,
                                         long stop_after = 0);

}  // namespace ietlab
