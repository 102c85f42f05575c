#include <doctest.h>

#include <algorithm>
#include <set>

#include "ietlab/errors.hpp"
#include "ietlab/rauzy.hpp"
#include "ietlab/rng.hpp"
#include "ietlab/sampling.hpp"

using namespace ietlab;

namespace {

Iet reversal_iet(Rng& rng, int d, int bits = 96) {
  std::vector<int> rev(d);
  for (int i = 0; i < d; ++i) rev[i] = d - i;
  return Iet::make(sample_simplex(rng, d, bits), Permutation(std::move(rev)));
}

// Subtractive continued fraction of p/q by plain Euclid, for the run-length
// oracle.
std::vector<long> cf_quotients(Int p, Int q) {
  std::vector<long> out;
  while (q != 0) {
    Int a = p / q, r = p % q;
    out.push_back(a.get_si());
    p = q;
    q = r;
  }
  return out;
}

}  // namespace

TEST_CASE("rv_step on the worked 2-IET") {
  Iet t = Iet::make({rat(1, 3), rat(2, 3)}, Permutation({2, 1}));
  RvStepResult step = rv_step(t);
  CHECK(step.next == Iet::make({rat(1, 2), rat(1, 2)}, Permutation({2, 1})));
  CHECK(step.type == StepType::B);
  auto sums = step.elem.column_sums();
  CHECK(sums == std::vector<Int>{2, 1});
  // lengths(T) proportional to elem * lengths(next), checked exactly.
  auto lifted = step.elem.mul_vec({1, 1});
  CHECK(Rational(lifted[0], lifted[1]) == Rational(t.lengths()[0] / t.lengths()[1]));
  CHECK(step.elem.determinant() == 1);

  CHECK_THROWS_AS(rv_step(Iet::make({rat(1, 2), rat(1, 2)}, Permutation({2, 1}))),
                  TieBreakdown);
  CHECK_THROWS_AS(rv_step(Iet::make({rat(0), rat(1)}, Permutation({2, 1}))),
                  DegenerateLength);
  // pi(d) = d forces equal critical lengths by definition.
  CHECK_THROWS_AS(rv_step(Iet::make({rat(1, 3), rat(2, 3)}, Permutation({1, 2}))),
                  TieBreakdown);
}

TEST_CASE("rv_step is the rescaled first-return map") {
  Rng rng(41);
  for (int i = 0; i < 12; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = reversal_iet(rng, d);
    RvStepResult step = rv_step(t);
    Rational crit = std::min(t.lengths()[d - 1],
                             t.lengths()[t.perm().inverse()(d) - 1]);
    Rational nu = 1 - crit;
    for (int k = 0; k < 8; ++k) {
      Rational x = sample_point(rng, 40) * nu;
      Rational y = t.eval(x);
      int returns = 1;
      while (y >= nu) {
        y = t.eval(y);
        ++returns;
      }
      CHECK(returns <= 2);
      CHECK(step.next.eval(x / nu) * nu == y);
    }
  }
}

TEST_CASE("d=2 word runs reproduce the subtractive continued fraction") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    Int p = rng.below(400) + 1, q = rng.below(400) + 1;
    Int g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    p /= g;
    q /= g;
    if (p == q) continue;
    Rational l1(p, p + q), l2(q, p + q);
    Iet t = Iet::make({l1, l2}, Permutation({2, 1}));
    RvState st = expand(t, StopRule::steps(100000));
    REQUIRE(st.degenerate);  // rational data always ties out

    // Expected word: runs of A (l1 larger first) alternating with B, with
    // run lengths the quotients of l1/l2 and the final run short by one.
    std::vector<long> quots = cf_quotients(p, q);
    std::string expect;
    char a = 'A', b = 'B';
    if (quots[0] == 0) {  // l1 < l2: the first run is B's
      quots.erase(quots.begin());
      std::swap(a, b);
    }
    for (size_t k = 0; k < quots.size(); ++k) {
      long reps = quots[k] - (k + 1 == quots.size() ? 1 : 0);
      expect.append(reps, k % 2 == 0 ? a : b);
    }
    CHECK(st.word == expect);
    CHECK(st.identity_holds());
  }
}

TEST_CASE("expand: empty stop and the tie flag") {
  Iet t = Iet::make({rat(1, 3), rat(2, 3)}, Permutation({2, 1}));
  RvState zero = expand(t, StopRule::steps(0));
  CHECK(zero.steps() == 0);
  CHECK(zero.matrix == IntMatrix::identity(2));
  CHECK(zero.word.empty());
  CHECK(zero.identity_holds());

  // Rotation by 2/3 induces rotation by 1/2: the second step is a tie, so
  // a 2-step request returns a 1-step degenerate state.
  RvState st = expand(t, StopRule::steps(2));
  CHECK(st.degenerate);
  CHECK(st.tie_step == 2);
  CHECK(st.steps() == 1);
  CHECK(st.matrix.cmax() == 2);
  CHECK(st.identity_holds());

  // A sample that does run two steps: |C_max| = 3 with the exact identity.
  RvState two = expand(Iet::make({rat(2, 5), rat(3, 5)}, Permutation({2, 1})),
                       StopRule::steps(2));
  CHECK_FALSE(two.degenerate);
  CHECK(two.steps() == 2);
  CHECK(two.matrix.cmax() == 3);
  CHECK(two.identity_holds());
  CHECK(two.word == "BA");
}

TEST_CASE("expansion identity and unimodularity hold at every step") {
  Rng rng(47);
  for (int i = 0; i < 10; ++i) {
    int d = 2 + static_cast<int>(rng.below(3));
    Iet t = reversal_iet(rng, d, 128);
    StopRule every;
    every.max_norm = Int(1) << 16;
    every.predicate = [](const RvState& st) {
      REQUIRE(st.identity_holds());
      return false;
    };
    RvState st = expand(t, every, nullptr);
    CHECK_FALSE(st.degenerate);
    CHECK(st.matrix.determinant() * st.matrix.determinant() == 1);
    // Column sums never decrease along the word.
    Int last = 1;
    for (const auto& ev : st.events) {
      CHECK(ev.cmax >= last);
      last = ev.cmax;
    }
  }
}

TEST_CASE("balance") {
  CHECK(balance(IntMatrix::identity(3)) == 1);
  IntMatrix m = elementary_matrix(Permutation({2, 1}), StepType::B);
  CHECK(balance(m) == 2);  // column sums (2, 1)
}

TEST_CASE("rauzy_class closures") {
  RauzyClass d2 = RauzyClass::of(Permutation({2, 1}));
  CHECK(d2.size() == 1);

  RauzyClass d3 = RauzyClass::of(Permutation({3, 2, 1}));
  CHECK(d3.size() == 3);
  CHECK(d3.index_of(Permutation({3, 2, 1})) >= 0);
  CHECK(d3.index_of(Permutation({2, 3, 1})) >= 0);
  CHECK(d3.index_of(Permutation({3, 1, 2})) >= 0);

  RauzyClass d4 = RauzyClass::of(Permutation({4, 3, 2, 1}));
  CHECK(d4.size() == 7);

  CHECK_THROWS_AS(RauzyClass::of(Permutation({1, 2})), ReduciblePermutation);
}

TEST_CASE("acceptable word search: d=2 oracle") {
  RauzyClass cls = RauzyClass::of(Permutation({2, 1}));
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  REQUIRE(table.entries().size() == 1);
  const AcceptableWord& w = table.entries()[0];
  CHECK(w.word == "AB");
  CHECK(w.matrix.positive());
  CHECK(w.measure == rat(1, 6));

  // Exhaustive check over short words: nothing positive of length < 2, and
  // AB is the lexicographically first positive word of length 2.
  for (const Cylinder& c : enumerate_cylinders(Permutation({2, 1}), 1))
    CHECK_FALSE(c.matrix.positive());
  auto depth2 = enumerate_cylinders(Permutation({2, 1}), 2);
  CHECK(depth2[0].word == "AA");
  CHECK_FALSE(depth2[0].matrix.positive());
  CHECK(depth2[1].word == "AB");
  CHECK(depth2[1].matrix.positive());
}

TEST_CASE("acceptable word search: d=3 class") {
  RauzyClass cls = RauzyClass::of(Permutation({3, 2, 1}));
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  REQUIRE(table.entries().size() == 3);
  for (const AcceptableWord& w : table.entries()) {
    CHECK(w.word.size() <= 6);
    CHECK(w.matrix.positive());
    CHECK(w.measure > 0);
    // No proper prefix is positive.
    IntMatrix m = IntMatrix::identity(3);
    Permutation p = w.start;
    for (size_t k = 0; k + 1 < w.word.size(); ++k) {
      StepType type = w.word[k] == 'A' ? StepType::A : StepType::B;
      m = m.mul(elementary_matrix(p, type));
      p = apply_step(p, type);
      CHECK_FALSE(m.positive());
    }
  }
}

TEST_CASE("matrices ending in an acceptable word are balanced by its entries") {
  RauzyClass cls = RauzyClass::of(Permutation({3, 2, 1}));
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  Rng rng(53);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    Iet t = reversal_iet(rng, 3, 96);
    RvState st = expand(t, StopRule::norm(Int(1) << 14), &table);
    for (const auto& [n, cmax] : detect_acceptable(st, table)) {
      // Recover the matrix at step n and the word that fired.
      RvState prefix = expand(t, StopRule::steps(n), &table);
      int idx = table.match_at(prefix.word, prefix.perm_trace, n);
      REQUIRE(idx >= 0);
      const IntMatrix& w = table.entries()[idx].matrix;
      Int lo = w.at(0, 0), hi = w.at(0, 0);
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
          lo = std::min(lo, w.at(r, s));
          hi = std::max(hi, w.at(r, s));
        }
      CHECK(balance(prefix.matrix) <= Rational(hi, lo));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("detect_acceptable on a word with a forced pattern") {
  // F_k/F_{k+2}, F_{k+1}/F_{k+2}: quotients all 1, word ABAB...
  Iet t = Iet::make({rat(377, 987), rat(610, 987)}, Permutation({2, 1}));
  RauzyClass cls = RauzyClass::of(Permutation({2, 1}));
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  RvState st = expand(t, StopRule::steps(4), &table);
  CHECK(st.word == "ABAB");
  auto hits = detect_acceptable(st, table);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].first == 2);
  CHECK(hits[1].first == 4);

  // A word shorter than every table word has no detections.
  RvState tiny = expand(t, StopRule::steps(1), &table);
  CHECK(detect_acceptable(tiny, table).empty());
}

TEST_CASE("cylinder measures: exact values and exact unit sums") {
  CHECK(cylinder_measure(IntMatrix::identity(4)) == 1);

  auto depth1 = enumerate_cylinders(Permutation({2, 1}), 1);
  CHECK(depth1[0].measure == rat(1, 2));
  CHECK(depth1[1].measure == rat(1, 2));

  for (int d : {2, 3}) {
    Permutation seed = d == 2 ? Permutation({2, 1}) : Permutation({3, 2, 1});
    for (int depth = 1; depth <= 3; ++depth) {
      Rational total = 0;
      for (const Cylinder& c : enumerate_cylinders(seed, depth))
        total += c.measure;
      CHECK(total == 1);
    }
  }
}

TEST_CASE("suffix determinism: C_max lengths replay the word prefix") {
  RauzyClass cls = RauzyClass::of(Permutation({3, 2, 1}));
  AcceptableWordTable table = AcceptableWordTable::build(cls);
  Rng rng(59);
  int replayed = 0;
  for (int i = 0; i < 25 && replayed < 12; ++i) {
    Iet t = reversal_iet(rng, 3, 96);
    RvState st = expand(t, StopRule::norm(Int(1) << 12), &table);
    auto hits = detect_acceptable(st, table);
    if (hits.empty()) continue;
    auto [n, cmax] = hits.back();
    RvState prefix = expand(t, StopRule::steps(n), &table);
    int idx = table.match_at(prefix.word, prefix.perm_trace, n);
    REQUIRE(idx >= 0);
    long block = n - static_cast<long>(table.entries()[idx].word.size());

    // Assign lengths proportional to the C_max column and expand.
    int col = prefix.matrix.cmax_index();
    std::vector<Rational> lens(3);
    Rational total = 0;
    for (int r = 0; r < 3; ++r) {
      lens[r] = Rational(prefix.matrix.at(r, col), cmax);
      lens[r].canonicalize();
      total += lens[r];
    }
    REQUIRE(total == 1);
    bool positive = std::all_of(lens.begin(), lens.end(),
                                [](const Rational& l) { return l > 0; });
    if (!positive) continue;
    RvState replay = expand(Iet::make(lens, t.perm()), StopRule::steps(block));
    long agree = std::min(replay.steps(), block);
    CHECK(replay.word.compare(0, agree, st.word, 0, agree) == 0);
    ++replayed;
  }
  CHECK(replayed >= 8);
}

TEST_CASE("balance probe: degenerate and monotone behaviour") {
  RauzyClass cls = RauzyClass::of(Permutation({2, 1}));
  // Perfect balance has probability zero for integer matrices in a window.
  BalanceProbeResult exact =
      balance_probe(cls, rat(4), 60, 101, rat(1), 64, 3);
  CHECK(exact.successes == 0);
  CHECK(exact.rho_hat == 0.0);

  BalanceProbeResult loose = balance_probe(cls, rat(4), 60, 101, rat(10), 64, 3);
  BalanceProbeResult looser =
      balance_probe(cls, rat(4), 60, 101, rat(100), 64, 3);
  CHECK(loose.windows == looser.windows);
  CHECK(loose.successes <= looser.successes);
  CHECK(loose.rho_hat > 0);
  CHECK(loose.ci_low > 0);
}
