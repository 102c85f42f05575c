#include "ietlab/spectral.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"
#include "ietlab/sampling.hpp"

namespace ietlab {

namespace {

// f's cells scaled onto a grid: cut points and values.
struct GridCells {
  std::vector<Int> cuts;        // 0 = c_0 < c_1 < ... < c_m = denom
  std::vector<Rational> values; // m values
};

GridCells cells_on_grid(const StepFunction& f, const Int& denom) {
  GridCells out;
  out.cuts.push_back(0);
  for (const auto& cell : f.cells()) {
    Rational r = cell.right * denom;
    out.cuts.push_back(r.get_num());
    out.values.push_back(cell.value);
  }
  return out;
}

// Index of the cell containing x: last cut <= x.
size_t cell_at(const std::vector<Int>& cuts, const Int& x) {
  size_t a = 0, b = cuts.size() - 2;
  while (a < b) {
    size_t mid = (a + b + 1) / 2;
    if (cuts[mid] <= x)
      a = mid;
    else
      b = mid - 1;
  }
  return a;
}

// sum over refined segments of v(domain cell) * v(image cell) * length,
// where the map is the grid translation `p`.
Rational overlap_correlation(const PiecewiseGrid& p, const GridCells& cells) {
  const size_t m = cells.values.size();
  // Accumulate exact overlap lengths per (domain cell, image cell).
  std::vector<Int> acc(m * m, Int(0));
  for (const auto& piece : p.pieces()) {
    Int x = piece.left;
    size_t dom = cell_at(cells.cuts, x);
    Int img_pos = x + piece.shift;
    size_t img = cell_at(cells.cuts, img_pos);
    while (x < piece.right) {
      Int stop = piece.right;
      if (cells.cuts[dom + 1] < stop) stop = cells.cuts[dom + 1];
      Int img_stop = cells.cuts[img + 1] - piece.shift;
      if (img_stop < stop) stop = img_stop;
      acc[dom * m + img] += stop - x;
      x = stop;
      if (x >= piece.right) break;
      if (x == cells.cuts[dom + 1]) ++dom;
      if (x + piece.shift == cells.cuts[img + 1]) ++img;
    }
  }
  Rational total = 0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      if (acc[i * m + j] == 0) continue;
      Rational len(acc[i * m + j], p.denom());
      len.canonicalize();
      total += cells.values[i] * cells.values[j] * len;
    }
  return total;
}

Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int function_denominator(const StepFunction& f) {
  Int q = 1;
  for (const auto& cell : f.cells())
    q = lcm_int(q, lcm_int(cell.left.get_den(), cell.right.get_den()));
  return q;
}

}  // namespace

StepFunction StepFunction::make(std::vector<Cell> cells) {
  if (cells.empty()) throw Error("step function needs cells");
  Rational cursor = 0;
  for (const Cell& c : cells) {
    if (c.left != cursor || c.right <= c.left)
      throw Error("cells must contiguously cover [0,1)");
    cursor = c.right;
  }
  if (cursor != 1) throw Error("cells must cover [0,1) exactly");
  StepFunction f;
  f.cells_ = std::move(cells);
  f.mean_zero_ = (f.mean() == 0);
  return f;
}

StepFunction StepFunction::centered_indicator(const Rational& b) {
  if (b <= 0 || b >= 1) throw Error("need 0 < b < 1");
  return make({{Rational(0), b, 1 - b}, {b, Rational(1), -b}});
}

Rational StepFunction::mean() const {
  Rational m = 0;
  for (const Cell& c : cells_) m += c.value * (c.right - c.left);
  return m;
}

Rational StepFunction::norm_sq() const {
  Rational m = 0;
  for (const Cell& c : cells_) m += c.value * c.value * (c.right - c.left);
  return m;
}

Rational correlation(const Iet& t, const StepFunction& f, unsigned long n) {
  PiecewiseGrid base = PiecewiseGrid::from_iet(t);
  Int q = lcm_int(base.denom(), function_denominator(f));
  PiecewiseGrid p = base.power(n).rescale(q);
  return overlap_correlation(p, cells_on_grid(f, q));
}

CorrelationSeries CorrelationSeries::compute(const Iet& t,
                                             const StepFunction& f,
                                             unsigned long max_n) {
  CorrelationSeries s;
  s.subject_ = t;
  s.f_ = f;
  s.values_.reserve(max_n + 1);
  s.values_.push_back(f.norm_sq());
  if (max_n == 0) return s;
  Int q = lcm_int(iet_denominator(t), function_denominator(f));
  PiecewiseGrid base = PiecewiseGrid::from_iet(t).rescale(q);
  GridCells cells = cells_on_grid(f, q);
  PiecewiseGrid acc = base;
  for (unsigned long n = 1; n <= max_n; ++n) {
    if (n > 1) acc = acc.then(base);
    s.values_.push_back(overlap_correlation(acc, cells));
  }
  return s;
}

const Rational& CorrelationSeries::c(long k) const {
  unsigned long idx = static_cast<unsigned long>(k < 0 ? -k : k);
  if (idx >= values_.size()) throw SeriesTooShort("correlation index beyond series");
  return values_[idx];
}

Rational wiener_average(const CorrelationSeries& series, unsigned long n) {
  if (n == 0) throw Error("Wiener average needs N >= 1");
  if (n > series.values().size())
    throw SeriesTooShort("series shorter than the averaging window");
  Rational acc = 0;
  for (unsigned long k = 0; k < n; ++k)
    acc += series.values()[k] * series.values()[k];
  return acc / Rational(static_cast<long>(n));
}

LowCorrelationSet low_correlation_set(const CorrelationSeries& series,
                                      const Rational& threshold, long k_range) {
  if (threshold <= 0) throw Error("threshold must be positive");
  if (k_range < 0) throw Error("k_range must be >= 0");
  const long horizon = static_cast<long>(series.max_index()) - k_range;
  if (horizon < 1) throw SeriesTooShort("series cannot support any n");
  const Rational bound = threshold * series.values()[0];
  LowCorrelationSet out;
  out.horizon = horizon;
  std::vector<long> non_members;
  for (long n = 1; n <= horizon; ++n) {
    bool ok = true;
    for (long k = -k_range; k <= k_range && ok; ++k)
      ok = abs(series.c(n + k)) < bound;
    if (ok)
      out.members.push_back(n);
    else
      non_members.push_back(n);
  }
  out.predicate = DensityPredicate::complement_of(std::move(non_members));
  out.density = Rational(static_cast<long>(out.members.size()), horizon);
  out.density.canonicalize();
  return out;
}

ContinuedFraction ContinuedFraction::of(const Rational& x) {
  ContinuedFraction cf;
  Int num = x.get_num(), den = x.get_den();
  Int pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;  // p_{-1}, p_{-2}, q_{-1}, q_{-2}
  while (den != 0) {
    Int a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Int pk = a * pm1 + pm2;
    Int qk = a * qm1 + qm2;
    cf.quotients.push_back(a);
    cf.p.push_back(pk);
    cf.q.push_back(qk);
    pm2 = pm1;
    pm1 = pk;
    qm2 = qm1;
    qm1 = qk;
    num = den;
    den = r;
  }
  return cf;
}

std::vector<Int> rotation_rigidity(const Rational& alpha, int count) {
  if (alpha <= 0 || alpha >= 1) throw Error("need 0 < alpha < 1");
  ContinuedFraction cf = ContinuedFraction::of(alpha);
  std::vector<Int> out;
  for (size_t k = 1; k < cf.q.size(); ++k) {  // skip the a_0 = 0 convergent
    if (out.empty() || cf.q[k] > out.back()) out.push_back(cf.q[k]);
    if (static_cast<int>(out.size()) == count) return out;
  }
  // alpha rational: exact period = final denominator; extend by multiples.
  Int period = alpha.get_den();
  Int next = out.empty() ? period : out.back() + period;
  // Align to a multiple of the period.
  Int rem = next % period;
  if (rem != 0) next += period - rem;
  while (static_cast<int>(out.size()) < count) {
    out.push_back(next);
    next += period;
  }
  return out;
}

DensityPredicate avoidance_set(const Rational& alpha, const Rational& delta) {
  return DensityPredicate::all().exclude_rotation_orbit(alpha, delta);
}

WitnessSearchResult disjointness_witness(const Iet& target,
                                         const StepFunction& f,
                                         const Rational& threshold,
                                         int k_range, const RauzyClass& cls,
                                         int denom_bits, std::uint64_t seed,
                                         long budget, const Int& norm_cap,
                                         long stop_after) {
  if (threshold <= 0 || threshold >= 1) throw Error("threshold in (0,1)");
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  const int d = cls.perms().front().size();
  const Rational c0 = f.norm_sq();
  const Rational corr_bound = threshold * c0;

  PiecewiseGrid target_base = PiecewiseGrid::from_iet(target);
  Int q = lcm_int(target_base.denom(), function_denominator(f));
  target_base = target_base.rescale(q);
  GridCells cells = cells_on_grid(f, q);

  WitnessSearchResult res;
  for (long i = 0; i < budget; ++i) {
    res.samples_used = i + 1;
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const Permutation& perm =
        cls.perms()[rng.below(static_cast<std::uint64_t>(cls.size()))];
    Iet s = Iet::make(sample_simplex(rng, d, denom_bits), perm);
    RvState st = expand(s, StopRule::norm(norm_cap), &table);
    for (const auto& [step, m] : detect_expected(st, table, threshold)) {
      ++res.candidates;
      if (m > norm_cap) continue;
      unsigned long time = m.get_ui();
      if (time <= static_cast<unsigned long>(k_range)) continue;
      Rational defect = rigidity_defect(s, time);
      if (!(defect < threshold)) continue;
      // Correlations of the target near time: walk out from m - k_range.
      PiecewiseGrid p = target_base.power(time - k_range);
      Rational worst = 0;
      bool ok = true;
      for (long k = -k_range; k <= k_range; ++k) {
        if (k > -k_range) p = p.then(target_base);
        Rational c = abs(overlap_correlation(p, cells));
        if (c > worst) worst = c;
        if (!(c < corr_bound)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      res.witnesses.push_back({i, s, step, m, defect, worst});
      if (stop_after > 0 &&
          static_cast<long>(res.witnesses.size()) >= stop_after)
        return res;
    }
  }
  if (stop_after > 0) res.budget_exhausted = true;
  return res;
}

}  // namespace ietlab
