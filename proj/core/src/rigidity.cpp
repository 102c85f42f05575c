#include "ietlab/rigidity.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"
#include "ietlab/piecewise.hpp"

namespace ietlab {

DensityPredicate DensityPredicate::all() { return DensityPredicate(); }

DensityPredicate DensityPredicate::complement_of(std::vector<long> excluded) {
  DensityPredicate p;
  p.exclude_values(std::move(excluded));
  return p;
}

DensityPredicate& DensityPredicate::exclude_rotation_orbit(
    const Rational& alpha, const Rational& delta) {
  if (alpha <= 0 || alpha >= 1 || delta <= 0)
    throw Error("need 0 < alpha < 1 and delta > 0");
  rotations_.emplace_back(alpha, delta);
  return *this;
}

DensityPredicate& DensityPredicate::exclude_progression(long modulus,
                                                        long residue) {
  if (modulus < 1 || residue < 0 || residue >= modulus)
    throw Error("bad progression");
  progressions_.emplace_back(modulus, residue);
  return *this;
}

DensityPredicate& DensityPredicate::exclude_values(std::vector<long> values) {
  excluded_.insert(excluded_.end(), values.begin(), values.end());
  std::sort(excluded_.begin(), excluded_.end());
  excluded_.erase(std::unique(excluded_.begin(), excluded_.end()),
                  excluded_.end());
  return *this;
}

bool DensityPredicate::contains(long n) const {
  if (n < 1) return false;
  if (std::binary_search(excluded_.begin(), excluded_.end(), n)) return false;
  for (const auto& [mod, res] : progressions_)
    if (n % mod == res) return false;
  for (const auto& [alpha, delta] : rotations_) {
    // ||n alpha|| < delta, evaluated exactly on numerators.
    const Int& p = alpha.get_num();
    const Int& q = alpha.get_den();
    Int r = (Int(n) * p) % q;
    Int dist = std::min(r, Int(q - r));
    // dist/q < delta  <=>  dist * delta_den < delta_num * q
    if (dist * delta.get_den() < delta.get_num() * q) return false;
  }
  return true;
}

Rational DensityPredicate::empirical_density(long horizon) const {
  if (horizon < 1) throw Error("density horizon must be >= 1");
  long count = 0;
  for (long n = 1; n <= horizon; ++n)
    if (contains(n)) ++count;
  Rational r(count, horizon);
  r.canonicalize();
  return r;
}

std::string DensityPredicate::describe() const {
  std::string out = "N";
  if (!excluded_.empty())
    out += " \\ {" + std::to_string(excluded_.size()) + " listed}";
  for (const auto& [alpha, delta] : rotations_)
    out += " \\ {n: ||n*" + format_rational(alpha) + "|| < " +
           format_rational(delta) + "}";
  for (const auto& [mod, res] : progressions_)
    out += " \\ {n = " + std::to_string(res) + " mod " + std::to_string(mod) +
           "}";
  return out;
}

Rational rigidity_defect(const Iet& t, unsigned long n) {
  if (n < 1) throw Error("rigidity defect needs n >= 1");
  return PiecewiseGrid::from_iet(t).power(n).displacement_integral();
}

RigidityReport scan_rigidity(const Iet& t, const Rational& eps, long n_max,
                             const DensityPredicate& a) {
  if (eps <= 0) throw Error("epsilon must be positive");
  RigidityReport rep{.subject = t,
                     .epsilon = eps,
                     .detections = {},
                     .first_hit = -1,
                     .dyadic_hits = {},
                     .density_proxy = Rational(0)};
  PiecewiseGrid base = PiecewiseGrid::from_iet(t);
  PiecewiseGrid acc = base;
  for (long n = 1; n <= n_max; ++n) {
    if (n > 1) acc = acc.then(base);
    if (!a.contains(n)) continue;
    Rational defect = acc.displacement_integral();
    if (defect < eps) {
      RigidityDetection det;
      det.time = n;
      det.defect = defect;
      det.defect_known = true;
      det.source = DetectionSource::plain;
      det.dyadic = 0;
      for (long v = n; v > 1; v >>= 1) ++det.dyadic;
      rep.dyadic_hits.insert(det.dyadic);
      rep.detections.push_back(std::move(det));
      if (rep.first_hit < 0)
        rep.first_hit = static_cast<long>(rep.detections.size()) - 1;
    }
  }
  return rep;
}

std::vector<std::pair<long, Int>> detect_expected(
    const RvState& state, const AcceptableWordTable& table,
    const Rational& eps) {
  if (eps <= 0 || eps > 1) throw Error("expected detection needs eps in (0,1]");
  // W membership is strict: concentration > 1 - eps/2.
  const Rational bound = 1 - eps / 2;
  std::vector<std::pair<long, Int>> out;
  bool any_flagged = false;
  for (const ExpansionEvent& ev : state.events) {
    if (!ev.acceptable) continue;
    any_flagged = true;
    if (ev.concentration > bound) out.emplace_back(ev.step, ev.cmax);
  }
  if (!any_flagged && !state.events.empty()) {
    // The state may have been expanded without the table; recover the
    // acceptable steps (concentrations are only recorded during expansion,
    // so re-expand in that case instead of silently returning nothing).
    auto acc = detect_acceptable(state, table);
    if (!acc.empty())
      throw Error("state was expanded without acceptance flags; "
                  "pass the table to expand()");
  }
  return out;
}

DyadicCensus dyadic_census_of(const Iet& t, const Rational& eps, int i_max,
                              const AcceptableWordTable& table) {
  if (i_max < 1) throw Error("i_max must be >= 1");
  RvState state = expand(t, StopRule::norm(Int(1) << (i_max + 1)), &table);
  auto detections = detect_expected(state, table, eps);
  std::set<int> hits;
  for (const auto& [step, m] : detections) {
    int i = static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
    if (i <= i_max) hits.insert(i);
  }
  Rational proxy(static_cast<long>(hits.size()), i_max);
  proxy.canonicalize();
  return DyadicCensus{std::move(hits), std::move(proxy),
                      std::move(detections), state.degenerate,
                      std::move(state)};
}

}  // namespace ietlab
