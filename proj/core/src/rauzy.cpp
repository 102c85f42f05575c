#include "ietlab/rauzy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "ietlab/errors.hpp"
#include "ietlab/piecewise.hpp"
#include "ietlab/rng.hpp"
#include "ietlab/sampling.hpp"

namespace ietlab {

namespace {

// 1-based position of d in the image row, i.e. pi^-1(d).
int alpha_of(const Permutation& p) {
  for (int i = 1; i <= p.size(); ++i)
    if (p(i) == p.size()) return i;
  return p.size();
}

int cmax_of(const std::vector<Int>& colsum) {
  int best = 0;
  for (size_t j = 1; j < colsum.size(); ++j)
    if (colsum[j] > colsum[best]) best = static_cast<int>(j);
  return best;
}

Rational balance_of(const std::vector<Int>& colsum) {
  const Int* lo = &colsum[0];
  const Int* hi = &colsum[0];
  for (const Int& v : colsum) {
    if (v < *lo) lo = &v;
    if (v > *hi) hi = &v;
  }
  Rational r(*hi, *lo);
  r.canonicalize();
  return r;
}

// Applies one induction step to unnormalized integer lengths, permutation,
// accumulated matrix and column sums, all in place. Returns the step type,
// or nothing on a tie.
std::optional<StepType> engine_step(std::vector<Int>& a, Permutation& perm,
                                    IntMatrix& m, std::vector<Int>& colsum) {
  const int d = static_cast<int>(a.size());
  const int alpha = alpha_of(perm);
  const int a0 = alpha - 1, d0 = d - 1;
  const int c = cmp(a[d0], a[a0]);
  if (c == 0) return std::nullopt;
  if (c < 0) {
    // Type A: I_alpha splits, the sliver of width l_d takes I_d's image.
    a[a0] -= a[d0];
    Int v = std::move(a[d0]);
    a.pop_back();
    a.insert(a.begin() + alpha, std::move(v));
    perm = perm.rauzy_a();
    for (int i = 0; i < d; ++i) {
      Int w = m.at(i, a0) + m.at(i, d0);
      for (int t = d0; t >= a0 + 2; --t) m.at(i, t) = m.at(i, t - 1);
      m.at(i, a0 + 1) = std::move(w);
    }
    Int s = colsum[a0] + colsum[d0];
    for (int t = d0; t >= a0 + 2; --t) colsum[t] = colsum[t - 1];
    colsum[a0 + 1] = std::move(s);
    return StepType::A;
  }
  // Type B: I_d is truncated, I_alpha returns through it.
  a[d0] -= a[a0];
  perm = perm.rauzy_b();
  for (int i = 0; i < d; ++i) m.at(i, a0) += m.at(i, d0);
  colsum[a0] += colsum[d0];
  return StepType::B;
}

std::vector<Int> integer_lengths(const Iet& t, Int& denom) {
  denom = iet_denominator(t);
  std::vector<Int> a(t.order());
  for (int i = 0; i < t.order(); ++i) {
    Rational v = t.lengths()[i] * denom;
    a[i] = v.get_num();
  }
  return a;
}

Iet normalized_iet(const std::vector<Int>& a, const Permutation& perm) {
  Int total = 0;
  for (const Int& v : a) total += v;
  std::vector<Rational> lens(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    lens[i] = Rational(a[i], total);
    lens[i].canonicalize();
  }
  return Iet::make(std::move(lens), perm);
}

}  // namespace

IntMatrix elementary_matrix(const Permutation& perm, StepType type) {
  const int d = perm.size();
  const int alpha = alpha_of(perm);
  IntMatrix e(d);
  if (type == StepType::A) {
    for (int i = 1; i < alpha; ++i) e.at(i - 1, i - 1) = 1;
    e.at(alpha - 1, alpha - 1) = 1;
    e.at(alpha - 1, alpha) = 1;
    for (int i = alpha + 1; i < d; ++i) e.at(i - 1, i) = 1;
    e.at(d - 1, alpha) = 1;
  } else {
    for (int i = 0; i < d; ++i) e.at(i, i) = 1;
    e.at(d - 1, alpha - 1) = 1;
  }
  return e;
}

Permutation apply_step(const Permutation& perm, StepType type) {
  return type == StepType::A ? perm.rauzy_a() : perm.rauzy_b();
}

RvStepResult rv_step(const Iet& t) {
  if (t.degenerate()) throw DegenerateLength("rv_step needs positive lengths");
  Int denom;
  std::vector<Int> a = integer_lengths(t, denom);
  Permutation perm = t.perm();
  const Permutation before = perm;
  IntMatrix m = IntMatrix::identity(t.order());
  std::vector<Int> colsum(t.order(), Int(1));
  auto type = engine_step(a, perm, m, colsum);
  if (!type)
    throw TieBreakdown("l_d equals l_{pi^-1(d)}: induction undefined");
  return RvStepResult{normalized_iet(a, perm), *type,
                      elementary_matrix(before, *type)};
}

Iet RvState::current() const { return normalized_iet(current_num, current_perm); }

bool RvState::identity_holds() const {
  return matrix.mul_vec(current_num) == start_num;
}

StopRule StopRule::norm(Int bound) {
  StopRule r;
  r.max_norm = std::move(bound);
  return r;
}

StopRule StopRule::steps(long n) {
  StopRule r;
  r.max_steps = n;
  return r;
}

RvState expand(const Iet& t, const StopRule& stop,
               const AcceptableWordTable* table) {
  if (t.degenerate()) throw DegenerateLength("expand needs positive lengths");
  RvState st{.start = t,
             .denom = Int(),
             .start_num = {},
             .current_num = {},
             .current_perm = t.perm(),
             .matrix = IntMatrix::identity(t.order()),
             .column_sums = std::vector<Int>(t.order(), Int(1)),
             .word = {},
             .perm_trace = {t.perm()},
             .events = {},
             .degenerate = false,
             .tie_step = -1};
  st.start_num = integer_lengths(t, st.denom);
  st.current_num = st.start_num;
  Int total = 0;
  for (const Int& v : st.current_num) total += v;

  const int d = t.order();
  auto stopped = [&](const Int& cmax, long n) {
    if (stop.max_norm && cmax >= *stop.max_norm) return true;
    if (stop.max_steps && n >= *stop.max_steps) return true;
    if (stop.predicate && stop.predicate(st)) return true;
    return false;
  };
  if (stop.max_steps && *stop.max_steps <= 0) return st;
  if (stop.max_norm && *stop.max_norm <= 1) return st;

  for (long n = 1;; ++n) {
    const int alpha = alpha_of(st.current_perm);
    const int c = cmp(st.current_num[d - 1], st.current_num[alpha - 1]);
    if (c == 0) {
      st.degenerate = true;
      st.tie_step = n;
      break;
    }
    // Total shrinks by the subtracted length.
    total -= (c < 0) ? st.current_num[d - 1] : st.current_num[alpha - 1];
    auto type = engine_step(st.current_num, st.current_perm, st.matrix,
                            st.column_sums);
    st.word += static_cast<char>(*type);
    st.perm_trace.push_back(st.current_perm);

    ExpansionEvent ev;
    ev.step = n;
    const int cmax_idx = cmax_of(st.column_sums);
    ev.cmax = st.column_sums[cmax_idx];
    ev.dyadic =
        static_cast<int>(mpz_sizeinbase(ev.cmax.get_mpz_t(), 2)) - 1;
    ev.balance = balance_of(st.column_sums);
    if (table) {
      ev.accept_entry = table->match_at(st.word, st.perm_trace, n);
      ev.acceptable = ev.accept_entry >= 0;
      if (ev.acceptable) {
        ev.concentration = Rational(st.current_num[cmax_idx], total);
        ev.concentration.canonicalize();
      }
    }
    st.events.push_back(std::move(ev));
    if (stopped(st.events.back().cmax, n)) break;
  }
  return st;
}

Rational balance(const IntMatrix& m) { return m.balance(); }

RauzyClass RauzyClass::of(const Permutation& seed) {
  if (!seed.irreducible())
    throw ReduciblePermutation("Rauzy class of a reducible permutation");
  std::set<Permutation> seen{seed};
  std::deque<Permutation> queue{seed};
  while (!queue.empty()) {
    Permutation p = queue.front();
    queue.pop_front();
    for (Permutation q : {p.rauzy_a(), p.rauzy_b()}) {
      if (!q.irreducible())
        throw Error("induction left the irreducible set");  // cannot happen
      if (seen.insert(q).second) queue.push_back(q);
    }
  }
  RauzyClass cls;
  cls.perms_.assign(seen.begin(), seen.end());
  cls.id_ = cls.perms_.front().format();
  return cls;
}

int RauzyClass::index_of(const Permutation& p) const {
  auto it = std::lower_bound(perms_.begin(), perms_.end(), p);
  if (it == perms_.end() || !(*it == p)) return -1;
  return static_cast<int>(it - perms_.begin());
}

AcceptableWordTable AcceptableWordTable::build(const RauzyClass& cls,
                                               int word_cap) {
  const int d = cls.perms().front().size();
  if (word_cap <= 0) word_cap = 4 * d * d;
  AcceptableWordTable table;
  table.class_ = cls;
  for (const Permutation& start : cls.perms()) {
    struct Node {
      std::string word;
      Permutation perm;
      IntMatrix m;
    };
    std::deque<Node> queue{{std::string(), start, IntMatrix::identity(d)}};
    std::optional<AcceptableWord> found;
    while (!found && !queue.empty()) {
      Node node = std::move(queue.front());
      queue.pop_front();
      if (static_cast<int>(node.word.size()) >= word_cap)
        throw SearchBudgetExceeded("no positive word within the length cap");
      for (StepType type : {StepType::A, StepType::B}) {
        IntMatrix m2 = node.m.mul(elementary_matrix(node.perm, type));
        std::string w2 = node.word + static_cast<char>(type);
        Permutation p2 = apply_step(node.perm, type);
        if (m2.positive()) {
          // Breadth-first in (length, lex) order: the first hit is canonical,
          // and no proper prefix was positive or it would have been taken.
          found = AcceptableWord{start, std::move(w2), std::move(m2),
                                 Rational()};
          break;
        }
        queue.push_back({std::move(w2), std::move(p2), std::move(m2)});
      }
    }
    if (!found) throw SearchBudgetExceeded("word search exhausted");
    found->measure = cylinder_measure(found->matrix);
    table.entries_.push_back(std::move(*found));
  }
  return table;
}

const AcceptableWord& AcceptableWordTable::entry_for(
    const Permutation& p) const {
  int idx = class_.index_of(p);
  if (idx < 0) throw Error("permutation not in the table's class");
  return entries_[idx];
}

int AcceptableWordTable::match_at(const std::string& word,
                                  const std::vector<Permutation>& perm_trace,
                                  long n) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const long len = static_cast<long>(e.word.size());
    if (n < len) continue;
    if (!(perm_trace[n - len] == e.start)) continue;
    if (word.compare(n - len, len, e.word) == 0) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::pair<long, Int>> detect_acceptable(
    const RvState& state, const AcceptableWordTable& table) {
  std::vector<std::pair<long, Int>> out;
  for (long n = 1; n <= state.steps(); ++n)
    if (table.match_at(state.word, state.perm_trace, n) >= 0)
      out.emplace_back(n, state.events[n - 1].cmax);
  return out;
}

Rational cylinder_measure(const IntMatrix& m) {
  Int prod = 1;
  for (const Int& s : m.column_sums()) prod *= s;
  Rational r(1, prod);
  r.canonicalize();
  return r;
}

std::vector<Cylinder> enumerate_cylinders(const Permutation& start,
                                          int depth) {
  std::vector<Cylinder> level{
      {std::string(), start, IntMatrix::identity(start.size()), Rational(1)}};
  for (int k = 0; k < depth; ++k) {
    std::vector<Cylinder> next;
    next.reserve(level.size() * 2);
    for (const Cylinder& c : level)
      for (StepType type : {StepType::A, StepType::B}) {
        IntMatrix m = c.matrix.mul(elementary_matrix(c.end, type));
        Rational measure = cylinder_measure(m);
        next.push_back(Cylinder{c.word + static_cast<char>(type),
                                apply_step(c.end, type), std::move(m),
                                std::move(measure)});
      }
    level = std::move(next);
  }
  return level;
}

BalanceProbeResult balance_probe(const RauzyClass& cls, const Rational& K,
                                 long samples, std::uint64_t seed,
                                 const Rational& nu0, int denom_bits,
                                 int windows_per_sample) {
  if (K <= 1) throw Error("balance probe needs K > 1");
  const int d = cls.perms().front().size();
  Rational kd = 1;
  for (int i = 0; i < d; ++i) kd *= K;

  // Norm checkpoints (K^d)^j, j = 1..windows.
  std::vector<Rational> thresholds(windows_per_sample + 1);
  thresholds[0] = 1;
  for (int j = 1; j <= windows_per_sample; ++j)
    thresholds[j] = thresholds[j - 1] * kd;
  Int cap = floor_int(thresholds.back()) + 1;

  long windows = 0, successes = 0;
  for (long s = 0; s < samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const Permutation& perm =
        cls.perms()[rng.below(static_cast<std::uint64_t>(cls.size()))];
    Iet t = Iet::make(sample_simplex(rng, d, denom_bits), perm);
    RvState st = expand(t, StopRule::norm(cap));
    int window = 0;
    bool hit = false;
    for (const ExpansionEvent& ev : st.events) {
      Rational norm(ev.cmax);
      while (window < windows_per_sample && norm >= thresholds[window + 1]) {
        // Window completed: count it before advancing.
        ++windows;
        if (hit) ++successes;
        ++window;
        hit = false;
      }
      if (window >= windows_per_sample) break;
      if (ev.balance < nu0) hit = true;
    }
    // Trailing window is incomplete (tie or stop) and is not counted.
  }

  BalanceProbeResult res;
  res.windows = windows;
  res.successes = successes;
  if (windows > 0) {
    const double z = 1.959963984540054;
    const double n = static_cast<double>(windows);
    const double p = static_cast<double>(successes) / n;
    const double den = 1.0 + z * z / n;
    const double center = (p + z * z / (2 * n)) / den;
    const double half =
        z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den;
    res.rho_hat = p;
    res.ci_low = std::max(0.0, center - half);
    res.ci_high = std::min(1.0, center + half);
  }
  return res;
}

}  // namespace ietlab
