#include "ietlab/sampling.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

std::vector<Rational> sample_simplex(Rng& rng, int d, int bits) {
  if (d < 2 || bits < 1) throw Error("sample_simplex needs d >= 2, bits >= 1");
  Int q = Int(1) << bits;
  std::vector<Int> cuts(d - 1);
  for (;;) {
    for (Int& c : cuts) c = rng.below_int(q - 1) + 1;  // in [1, q-1]
    std::sort(cuts.begin(), cuts.end());
    bool distinct = true;
    for (int i = 0; i + 1 < d - 1; ++i)
      if (cuts[i] == cuts[i + 1]) distinct = false;
    if (distinct) break;
  }
  std::vector<Rational> lens(d);
  Int prev = 0;
  for (int i = 0; i < d - 1; ++i) {
    lens[i] = Rational(cuts[i] - prev, q);
    lens[i].canonicalize();
    prev = cuts[i];
  }
  lens[d - 1] = Rational(q - prev, q);
  lens[d - 1].canonicalize();
  return lens;
}

Rational sample_point(Rng& rng, int bits) {
  Rational r(rng.bits(static_cast<unsigned>(bits)), Int(1) << bits);
  r.canonicalize();
  return r;
}

}  // namespace ietlab
