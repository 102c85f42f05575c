#include "ietlab/interval_exchange.hpp"

#include <algorithm>
#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

Iet Iet::make(std::vector<Rational> lengths, Permutation perm) {
  if (static_cast<int>(lengths.size()) != perm.size())
    throw NotAPermutation("length vector and permutation size mismatch");
  if (lengths.size() < 2) throw NotAPermutation("need d >= 2 intervals");
  Rational sum = 0;
  for (const Rational& l : lengths) {
    if (l < 0) throw NegativeLength("negative interval length");
    sum += l;
  }
  if (sum != 1) throw NonUnitSum("interval lengths must sum to 1 exactly");
  return Iet(std::move(lengths), std::move(perm));
}

Iet::Iet(std::vector<Rational> lengths, Permutation perm)
    : lengths_(std::move(lengths)), perm_(std::move(perm)) {
  const int d = order();
  breaks_.resize(d + 1);
  breaks_[0] = 0;
  for (int j = 1; j <= d; ++j) breaks_[j] = breaks_[j - 1] + lengths_[j - 1];

  // Image start of I_j is the total length of intervals placed before it.
  std::vector<Rational> img_start(d);
  Permutation inv = perm_.inverse();
  Rational acc = 0;
  for (int pos = 1; pos <= d; ++pos) {
    int j = inv(pos);
    img_start[j - 1] = acc;
    acc += lengths_[j - 1];
  }
  shifts_.resize(d);
  for (int j = 0; j < d; ++j) shifts_[j] = img_start[j] - breaks_[j];
}

bool Iet::degenerate() const {
  return std::any_of(lengths_.begin(), lengths_.end(),
                     [](const Rational& l) { return l == 0; });
}

Rational Iet::eval(const Rational& x) const {
  if (x < 0 || x >= 1) throw OutOfDomain("eval outside [0,1)");
  // Largest j with b_{j-1} <= x; zero-length intervals never contain x.
  int lo = 1, hi = order();
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (breaks_[mid - 1] <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return x + shifts_[lo - 1];
}

Iet Iet::inverse() const {
  if (degenerate()) throw DegenerateLength("cannot invert with a zero length");
  const int d = order();
  Permutation inv = perm_.inverse();
  std::vector<Rational> lens(d);
  for (int i = 1; i <= d; ++i) lens[i - 1] = lengths_[inv(i) - 1];
  return Iet::make(std::move(lens), inv);
}

KeaneResult Iet::keane_check(int depth) const {
  const int d = order();
  // Genuine discontinuities: interior breakpoints where the shift jumps.
  std::vector<int> disc;
  for (int j = 1; j < d; ++j)
    if (shifts_[j - 1] != shifts_[j]) disc.push_back(j);
  for (int i : disc) {
    Rational x = breaks_[i];
    for (int n = 1; n <= depth; ++n) {
      x = eval(x);
      for (int j : disc)
        if (x == breaks_[j]) return KeaneResult{false, n, i, j};
    }
  }
  return KeaneResult{};
}

Iet Iet::parse(const std::string& text) {
  auto semi = text.find(';');
  if (semi == std::string::npos)
    throw ParseError("IET literal needs 'lengths;permutation'");
  auto lens = parse_rational_list(text.substr(0, semi));
  auto perm = Permutation::parse(text.substr(semi + 1));
  return Iet::make(std::move(lens), std::move(perm));
}

std::string Iet::format() const {
  std::string out;
  for (size_t i = 0; i < lengths_.size(); ++i) {
    if (i) out += ',';
    out += format_rational(lengths_[i]);
  }
  out += ';';
  out += perm_.format();
  return out;
}

Iet rotation(const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) throw OutOfDomain("rotation needs 0 < alpha < 1");
  return Iet::make({1 - alpha, alpha}, Permutation({2, 1}));
}

}  // namespace ietlab
