#include "ietlab/piecewise.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

namespace {

void append_merged(std::vector<PiecewiseGrid::Piece>& out, Int left, Int right,
                   Int shift) {
  if (left == right) return;
  if (!out.empty() && out.back().right == left && out.back().shift == shift) {
    out.back().right = std::move(right);
    return;
  }
  out.push_back({std::move(left), std::move(right), std::move(shift)});
}

}  // namespace

PiecewiseGrid PiecewiseGrid::identity(Int denom) {
  PiecewiseGrid g;
  g.denom_ = denom;
  g.pieces_.push_back({Int(0), std::move(denom), Int(0)});
  return g;
}

Int iet_denominator(const Iet& t) {
  Int q = 1;
  for (const Rational& l : t.lengths())
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), l.get_den().get_mpz_t());
  return q;
}

PiecewiseGrid PiecewiseGrid::from_iet(const Iet& t) {
  if (t.degenerate())
    throw DegenerateLength("piecewise form needs all lengths positive");
  PiecewiseGrid g;
  g.denom_ = iet_denominator(t);
  const auto& b = t.breakpoints();
  for (int j = 1; j <= t.order(); ++j) {
    Rational l = b[j - 1] * g.denom_, r = b[j] * g.denom_,
             s = t.shift(j) * g.denom_;
    append_merged(g.pieces_, l.get_num(), r.get_num(), s.get_num());
  }
  return g;
}

PiecewiseGrid PiecewiseGrid::make(Int denom, std::vector<Piece> pieces) {
  PiecewiseGrid g;
  g.denom_ = std::move(denom);
  Int cursor = 0;
  for (Piece& p : pieces) {
    if (p.left != cursor || p.right <= p.left)
      throw Error("grid pieces must contiguously cover [0, denom)");
    cursor = p.right;
    append_merged(g.pieces_, std::move(p.left), std::move(p.right),
                  std::move(p.shift));
  }
  if (cursor != g.denom_) throw Error("grid pieces must cover [0, denom)");
  return g;
}

PiecewiseGrid PiecewiseGrid::then(const PiecewiseGrid& next) const {
  PiecewiseGrid out;
  out.denom_ = denom_;
  out.pieces_.reserve(pieces_.size() + next.pieces_.size());
  const auto& np = next.pieces_;
  for (const Piece& p : pieces_) {
    // Image [p.left+p.shift, p.right+p.shift) refined against next's pieces.
    Int lo = p.left + p.shift;
    Int hi = p.right + p.shift;
    // Last piece of next with left <= lo.
    size_t a = 0, b = np.size() - 1;
    while (a < b) {
      size_t mid = (a + b + 1) / 2;
      if (np[mid].left <= lo)
        a = mid;
      else
        b = mid - 1;
    }
    for (size_t k = a; k < np.size() && np[k].left < hi; ++k) {
      Int u = std::max(lo, np[k].left);
      Int v = std::min(hi, np[k].right);
      if (u >= v) continue;
      append_merged(out.pieces_, u - p.shift, v - p.shift, p.shift + np[k].shift);
    }
  }
  return out;
}

PiecewiseGrid PiecewiseGrid::power(unsigned long n) const {
  if (n == 0) return identity(denom_);
  // Repeated squaring from the top bit down.
  int top = 63;
  while (top > 0 && !((n >> top) & 1)) --top;
  PiecewiseGrid acc = *this;
  for (int bit = top - 1; bit >= 0; --bit) {
    acc = acc.then(acc);
    if ((n >> bit) & 1) acc = acc.then(*this);
  }
  return acc;
}

Int PiecewiseGrid::eval(const Int& x) const {
  size_t a = 0, b = pieces_.size() - 1;
  while (a < b) {
    size_t mid = (a + b + 1) / 2;
    if (pieces_[mid].left <= x)
      a = mid;
    else
      b = mid - 1;
  }
  return x + pieces_[a].shift;
}

Rational PiecewiseGrid::displacement_integral() const {
  Int acc = 0;
  Int tmp;
  for (const Piece& p : pieces_) {
    tmp = p.right - p.left;
    tmp *= abs(p.shift);
    acc += tmp;
  }
  Rational r(acc, denom_ * denom_);
  r.canonicalize();
  return r;
}

bool PiecewiseGrid::preserves_measure() const {
  std::vector<std::pair<Int, Int>> imgs;
  imgs.reserve(pieces_.size());
  for (const Piece& p : pieces_)
    imgs.emplace_back(p.left + p.shift, p.right + p.shift);
  std::sort(imgs.begin(), imgs.end());
  Int cursor = 0;
  for (auto& [l, r] : imgs) {
    if (l != cursor) return false;
    cursor = r;
  }
  return cursor == denom_;
}

PiecewiseGrid PiecewiseGrid::rescale(const Int& new_denom) const {
  Int f;
  mpz_divexact(f.get_mpz_t(), new_denom.get_mpz_t(), denom_.get_mpz_t());
  PiecewiseGrid out;
  out.denom_ = new_denom;
  out.pieces_.reserve(pieces_.size());
  for (const Piece& p : pieces_)
    out.pieces_.push_back({p.left * f, p.right * f, p.shift * f});
  return out;
}

PiecewiseTranslation PiecewiseTranslation::make(std::vector<Piece> pieces) {
  if (pieces.empty()) throw Error("piecewise translation needs pieces");
  Rational cursor = 0;
  for (const Piece& p : pieces) {
    if (p.left != cursor || p.right <= p.left)
      throw Error("pieces must contiguously cover [0,1)");
    if (p.left + p.shift < 0 || p.right + p.shift > 1)
      throw Error("piece image escapes [0,1)");
    cursor = p.right;
  }
  if (cursor != 1) throw Error("pieces must cover [0,1) exactly");
  PiecewiseTranslation t;
  t.pieces_ = std::move(pieces);
  if (!t.to_grid().preserves_measure())
    throw Error("image intervals do not partition [0,1)");
  return t;
}

PiecewiseTranslation PiecewiseTranslation::identity() {
  PiecewiseTranslation t;
  t.pieces_.push_back({Rational(0), Rational(1), Rational(0)});
  return t;
}

PiecewiseTranslation PiecewiseTranslation::from_grid(const PiecewiseGrid& g) {
  PiecewiseTranslation t;
  t.pieces_.reserve(g.piece_count());
  for (const auto& p : g.pieces()) {
    Rational l(p.left, g.denom()), r(p.right, g.denom()), s(p.shift, g.denom());
    l.canonicalize();
    r.canonicalize();
    s.canonicalize();
    t.pieces_.push_back({std::move(l), std::move(r), std::move(s)});
  }
  return t;
}

Rational PiecewiseTranslation::eval(const Rational& x) const {
  if (x < 0 || x >= 1) throw OutOfDomain("eval outside [0,1)");
  size_t a = 0, b = pieces_.size() - 1;
  while (a < b) {
    size_t mid = (a + b + 1) / 2;
    if (pieces_[mid].left <= x)
      a = mid;
    else
      b = mid - 1;
  }
  return x + pieces_[a].shift;
}

PiecewiseGrid PiecewiseTranslation::to_grid() const {
  Int q = 1;
  for (const Piece& p : pieces_) {
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), p.left.get_den().get_mpz_t());
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), p.shift.get_den().get_mpz_t());
  }
  std::vector<PiecewiseGrid::Piece> ps;
  ps.reserve(pieces_.size());
  for (const Piece& p : pieces_) {
    Rational l = p.left * q, r = p.right * q, s = p.shift * q;
    ps.push_back({l.get_num(), r.get_num(), s.get_num()});
  }
  return PiecewiseGrid::make(std::move(q), std::move(ps));
}

PiecewiseTranslation PiecewiseTranslation::then(
    const PiecewiseTranslation& next) const {
  PiecewiseGrid a = to_grid(), b = next.to_grid();
  Int q;
  mpz_lcm(q.get_mpz_t(), a.denom().get_mpz_t(), b.denom().get_mpz_t());
  return from_grid(a.rescale(q).then(b.rescale(q)));
}

PiecewiseTranslation to_piecewise(const Iet& t, unsigned long n) {
  PiecewiseGrid base = PiecewiseGrid::from_iet(t);
  if (n == 0) return PiecewiseTranslation::from_grid(PiecewiseGrid::identity(base.denom()));
  if (n <= 64) {
    PiecewiseGrid acc = base;
    for (unsigned long k = 1; k < n; ++k) acc = acc.then(base);
    return PiecewiseTranslation::from_grid(acc);
  }
  return PiecewiseTranslation::from_grid(base.power(n));
}

}  // namespace ietlab
