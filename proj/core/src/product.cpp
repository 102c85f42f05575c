#include "ietlab/product.hpp"

#include <thread>

#include "ietlab/errors.hpp"
#include "ietlab/piecewise.hpp"

namespace ietlab {

namespace {

Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int scaled(const Rational& x, const Int& denom) {
  Rational v = x * denom;
  return v.get_num();
}

// One component's orbit machinery: the grid map plus window bounds.
struct Component {
  PiecewiseGrid map;
  Int lo, hi;

  Component(const Iet& t, const Rational& w_lo, const Rational& w_hi,
            const Int& extra_denom)
      : map(PiecewiseGrid::from_iet(t)) {
    Int q = lcm_int(map.denom(), extra_denom);
    q = lcm_int(q, lcm_int(w_lo.get_den(), w_hi.get_den()));
    map = map.rescale(q);
    lo = scaled(w_lo, q);
    hi = scaled(w_hi, q);
  }
};

// Steps x through the map d-1 compares at a time; pieces are few (= d for
// one application of an IET), so a linear scan beats binary search here.
inline void step_inplace(Int& x, const PiecewiseGrid& map) {
  for (const auto& piece : map.pieces())
    if (x < piece.right) {
      x += piece.shift;
      return;
    }
}

void run_starts(const Component& cx, const Component& cy,
                const std::vector<std::pair<Rational, Rational>>& starts,
                long horizon, size_t begin, size_t end,
                std::vector<long>& hits) {
  for (size_t s = begin; s < end; ++s) {
    Int x = scaled(starts[s].first, cx.map.denom());
    Int y = scaled(starts[s].second, cy.map.denom());
    long count = 0;
    for (long k = 0; k < horizon; ++k) {
      if (x >= cx.lo && x < cx.hi && y >= cy.lo && y < cy.hi) ++count;
      step_inplace(x, cx.map);
      step_inplace(y, cy.map);
    }
    hits[s] = count;
  }
}

}  // namespace

BirkhoffStats product_orbit_average(
    const ProductSystem& p, const Rectangle& rect,
    const std::vector<std::pair<Rational, Rational>>& starts, long horizon,
    int threads) {
  if (horizon < 1) throw Error("horizon must be >= 1");
  if (rect.x_lo < 0 || rect.x_hi > 1 || rect.y_lo < 0 || rect.y_hi > 1 ||
      rect.x_lo >= rect.x_hi || rect.y_lo >= rect.y_hi)
    throw Error("rectangle must be nondegenerate inside [0,1)^2");

  // Starts folding into the grids keeps every membership test an integer
  // comparison.
  Int sx_denom = 1, sy_denom = 1;
  for (const auto& [x, y] : starts) {
    sx_denom = lcm_int(sx_denom, x.get_den());
    sy_denom = lcm_int(sy_denom, y.get_den());
  }
  Component cx(p.first, rect.x_lo, rect.x_hi, sx_denom);
  Component cy(p.second, rect.y_lo, rect.y_hi, sy_denom);

  std::vector<long> hits(starts.size(), 0);
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::thread::hardware_concurrency();
  if (n_threads <= 1 || starts.size() <= 1) {
    run_starts(cx, cy, starts, horizon, 0, starts.size(), hits);
  } else {
    n_threads = std::min<unsigned>(n_threads, starts.size());
    std::vector<std::thread> pool;
    size_t chunk = (starts.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      size_t b = t * chunk, e = std::min(starts.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_starts, std::cref(cx), std::cref(cy),
                        std::cref(starts), horizon, b, e, std::ref(hits));
    }
    for (auto& th : pool) th.join();
  }

  BirkhoffStats out;
  out.rect = rect;
  out.horizon = horizon;
  out.starts = starts;
  out.target = rect.area();
  out.max_deviation = 0;
  for (size_t s = 0; s < starts.size(); ++s) {
    Rational avg(hits[s], horizon);
    avg.canonicalize();
    Rational dev = abs(avg - out.target);
    if (dev > out.max_deviation) out.max_deviation = dev;
    out.averages.push_back(std::move(avg));
  }
  return out;
}

ProjectionStats projection_check(
    const ProductSystem& p, const Rational& a_lo, const Rational& a_hi,
    long horizon, const std::vector<std::pair<Rational, Rational>>& starts) {
  if (horizon < 1) throw Error("horizon must be >= 1");
  Int sx_denom = 1;
  for (const auto& [x, y] : starts) sx_denom = lcm_int(sx_denom, x.get_den());
  Component cx(p.first, a_lo, a_hi, sx_denom);
  Component cy(p.second, Rational(0), Rational(1), Int(1));

  ProjectionStats out;
  out.target = a_hi - a_lo;
  out.max_deviation = 0;
  for (const auto& [x0, y0] : starts) {
    Int x = scaled(x0, cx.map.denom());
    Int y = scaled(y0, cy.map.denom());
    long count = 0;
    for (long k = 0; k < horizon; ++k) {
      if (x >= cx.lo && x < cx.hi) ++count;
      step_inplace(x, cx.map);
      step_inplace(y, cy.map);
    }
    Rational freq(count, horizon);
    freq.canonicalize();
    Rational dev = abs(freq - out.target);
    if (dev > out.max_deviation) out.max_deviation = dev;
    out.frequencies.push_back(std::move(freq));
  }
  return out;
}

}  // namespace ietlab
