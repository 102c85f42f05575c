#pragma once

#include <set>
#include <string>
#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/rauzy.hpp"

namespace ietlab {

// Decidable, exactly evaluable membership predicate for subsets of the
// naturals of prescribed density: the complement of (an explicit finite
// list) u (near-rigidity sets {n : ||n alpha|| < delta}) u (arithmetic
// progressions). These closed forms keep density bookkeeping exact.
class DensityPredicate {
 public:
  static DensityPredicate all();
  static DensityPredicate complement_of(std::vector<long> excluded);

  DensityPredicate& exclude_rotation_orbit(const Rational& alpha,
                                           const Rational& delta);
  DensityPredicate& exclude_progression(long modulus, long residue);
  DensityPredicate& exclude_values(std::vector<long> values);

  bool contains(long n) const;
  // |A intersect [1,N]| / N, exact.
  Rational empirical_density(long horizon) const;
  std::string describe() const;

 private:
  std::vector<long> excluded_;  // sorted
  std::vector<std::pair<Rational, Rational>> rotations_;  // (alpha, delta)
  std::vector<std::pair<long, long>> progressions_;       // (modulus, residue)
};

enum class DetectionSource { plain, acceptable, expected };

struct RigidityDetection {
  long time = 0;   // n for plain scans, m = |C_max| for induction detections
  long step = -1;  // expansion step for induction detections
  Rational defect;
  bool defect_known = false;
  DetectionSource source = DetectionSource::plain;
  int dyadic = 0;
  bool in_predicate = true;
};

struct RigidityReport {
  Iet subject;
  Rational epsilon;
  std::vector<RigidityDetection> detections;
  long first_hit = -1;            // index into detections, -1 none
  std::set<int> dyadic_hits;      // windows containing a detection
  Rational density_proxy;         // |hits| / i_max when a window scan ran
};

// Exact rigidity defect integral |T^n x - x| dx: the displacement sum of
// the piecewise form of T^n. For d = 2 this equals 2 {n l_2}(1 - {n l_2}).
// claims: rigidity-defect, expected-rigidity-soundness
Rational rigidity_defect(const Iet& t, unsigned long n);

// Every n <= n_max with n in A and defect < eps, defects recorded exactly.
// claims: rigidity-defect, rigidity-in-sparse-sets
RigidityReport scan_rigidity(const Iet& t, const Rational& eps, long n_max,
                             const DensityPredicate& a);

// Steps n where the word suffix is acceptable and the renormalized IET
// carries more than 1 - eps/2 of its length on the C_max column; the
// reported time is m = |C_max(M(S,n))|. Requires a state expanded with the
// same table (the per-step concentrations are recorded then).
// claims: expected-rigidity-soundness, dyadic-rigidity-density
std::vector<std::pair<long, Int>> detect_expected(const RvState& state,
                                                  const AcceptableWordTable& table,
                                                  const Rational& eps);

struct DyadicCensus {
  std::set<int> hits;        // windows i <= i_max containing a detection
  Rational proxy;            // |hits| / i_max
  std::vector<std::pair<long, Int>> detections;  // (step, m)
  bool tie = false;
  RvState state;
};

// Expands until |C_max| >= 2^(i_max+1) (or a tie) and reports which dyadic
// windows P_i, i <= i_max, contain an expected eps-rigidity time.
// claims: dyadic-rigidity-density
DyadicCensus dyadic_census_of(const Iet& t, const Rational& eps, int i_max,
                              const AcceptableWordTable& table);

}  // namespace ietlab
