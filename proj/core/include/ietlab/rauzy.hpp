#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/matrix.hpp"
#include "ietlab/permutation.hpp"
#include "ietlab/rational.hpp"

namespace ietlab {

// The two induction operations. A cuts the domain's last interval into the
// rightmost image slot (l_d < l_{pi^-1(d)}), B truncates the last interval
// (l_d > l_{pi^-1(d)}). Equality is a TieBreakdown.
enum class StepType : char { A = 'A', B = 'B' };

// Elementary matrix of a single induction step at permutation `perm`:
// lengths(before) = E * lengths(after), entrywise over a common denominator.
IntMatrix elementary_matrix(const Permutation& perm, StepType type);

// One step applied to `perm` alone.
Permutation apply_step(const Permutation& perm, StepType type);

struct RvStepResult {
  Iet next;        // normalized first-return map
  StepType type;
  IntMatrix elem;  // lengths(T) proportional to elem * lengths(next)
};

// Rauzy-Veech induction: the rescaled first-return map of T to
// [0, 1 - min(l_d, l_{pi^-1(d)})). Throws TieBreakdown when the two
// critical lengths coincide, DegenerateLength on zero lengths.
// claims: induction-matrix-identity
RvStepResult rv_step(const Iet& t);

struct ExpansionEvent {
  long step = 0;  // 1-based
  Int cmax;
  int dyadic = 0;        // i with 2^i <= |C_max| < 2^{i+1}
  Rational balance;      // max column-sum ratio of the accumulated matrix
  bool acceptable = false;
  int accept_entry = -1;  // table row that fired, -1 otherwise
  // Normalized length of the current IET at the C_max column; recorded at
  // acceptable steps (drives expected-rigidity detection for any epsilon).
  Rational concentration;
};

// Accumulated state of an expansion: everything needed to replay or audit
// it. lengths(start) == matrix * current_numerators / denominator holds
// exactly at every step.
struct RvState {
  Iet start;
  Int denom;                    // common denominator of start's lengths
  std::vector<Int> start_num;   // start lengths * denom
  std::vector<Int> current_num; // unnormalized current lengths * denom
  Permutation current_perm;
  IntMatrix matrix;
  std::vector<Int> column_sums;
  std::string word;                     // one char per step, 'A'/'B'
  std::vector<Permutation> perm_trace;  // perm after k steps, k = 0..steps
  std::vector<ExpansionEvent> events;
  bool degenerate = false;  // expansion hit a tie
  long tie_step = -1;       // 1-based index of the step that was undefined

  long steps() const { return static_cast<long>(word.size()); }
  Iet current() const;  // normalized current IET
  // Exact check of the induction identity; true on every honest state.
  bool identity_holds() const;
};

struct StopRule {
  std::optional<Int> max_norm;   // stop once |C_max| >= max_norm
  std::optional<long> max_steps;
  std::function<bool(const RvState&)> predicate;  // optional extra stop

  static StopRule norm(Int bound);
  static StopRule steps(long n);
};

class RauzyClass;
class AcceptableWordTable;

// Applies rv_step until the stop rule fires or a tie ends the expansion;
// accumulates matrix, word, permutation trace and one event per step.
// A table enables acceptable-pair flagging as the word grows.
// claims: induction-matrix-identity, acceptable-pairs
RvState expand(const Iet& t, const StopRule& stop,
               const AcceptableWordTable* table = nullptr);

// max_{i,j} |C_i(M)| / |C_j(M)|. M is nu-balanced iff balance(M) < nu.
// claims: matrix-balance
Rational balance(const IntMatrix& m);

// Closure of an irreducible permutation under both induction operations.
// claims: rauzy-class-closure
class RauzyClass {
 public:
  static RauzyClass of(const Permutation& seed);

  int size() const { return static_cast<int>(perms_.size()); }
  const std::vector<Permutation>& perms() const { return perms_; }
  const std::string& id() const { return id_; }
  int index_of(const Permutation& p) const;  // -1 if absent

 private:
  std::vector<Permutation> perms_;  // sorted
  std::string id_;                  // lexicographically smallest member
};

// For each permutation of a class, the canonical word whose matrix is
// strictly positive while no proper prefix is: shortest, ties broken
// lexicographically with A < B. `measure` is the word's relative cylinder
// measure (product of inverse column sums).
struct AcceptableWord {
  Permutation start;
  std::string word;
  IntMatrix matrix;
  Rational measure;
};

// claims: acceptable-pairs
class AcceptableWordTable {
 public:
  // word_cap <= 0 means the default budget of 4d^2 letters; exceeding it
  // throws SearchBudgetExceeded.
  static AcceptableWordTable build(const RauzyClass& cls, int word_cap = 0);

  const RauzyClass& rauzy_class() const { return class_; }
  const std::vector<AcceptableWord>& entries() const { return entries_; }
  const AcceptableWord& entry_for(const Permutation& p) const;

  // Table row whose word is a suffix of `word` ending at step n with the
  // matching anchor permutation at step n - |word|; -1 when none fires.
  int match_at(const std::string& word,
               const std::vector<Permutation>& perm_trace, long n) const;

 private:
  RauzyClass class_;
  std::vector<AcceptableWord> entries_;  // aligned with class_.perms()
};

// Every step n whose word suffix matches the table entry anchored at
// n - |omega_i|; the pairs (M(S,n), C_max) at those n are the acceptable
// pairs. Returns (n, |C_max(M(S,n))|) sorted by n.
// claims: acceptable-pairs, acceptable-multiplicity
std::vector<std::pair<long, Int>> detect_acceptable(
    const RvState& state, const AcceptableWordTable& table);

// Relative cylinder measure of the matrix: product over columns of
// 1/|C_i(M)|. Ratios and same-depth normalizations are meaningful; the
// class constant cancels.
// claims: cylinder-measure-law
Rational cylinder_measure(const IntMatrix& m);

// All 2^depth cylinders of a fixed start permutation: word, end
// permutation, matrix and relative measure. The measures of a fixed depth
// sum to exactly 1.
struct Cylinder {
  std::string word;
  Permutation end;
  IntMatrix matrix;
  Rational measure;
};
std::vector<Cylinder> enumerate_cylinders(const Permutation& start, int depth);

// Monte Carlo estimate of the balance recurrence probability: within each
// norm window [K^(d j), K^(d (j+1))), does the accumulated matrix become
// nu0-balanced? Windows are deterministic in the expansion, so enlarging
// nu0 on the same seed can only add successes.
// claims: balance-recurrence
struct BalanceProbeResult {
  long windows = 0;
  long successes = 0;
  double rho_hat = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
};
BalanceProbeResult balance_probe(const RauzyClass& cls, const Rational& K,
                                 long samples, std::uint64_t seed,
                                 const Rational& nu0, int denom_bits = 128,
                                 int windows_per_sample = 6);

}  // namespace ietlab
