#include "ietlab/claim_map.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

const std::vector<ClaimEntry>& claim_registry() {
  static const std::vector<ClaimEntry> registry = {
      {"iet-evaluation",
       "d lengths and a permutation define a bijective piecewise translation "
       "of [0,1); evaluation follows the displacement formula exactly",
       {"Iet::make", "Iet::eval", "Iet::inverse"},
       {1}},
      {"irreducible-permutations",
       "pi({1..k}) != {1..k} for k < d; only irreducible permutations carry "
       "dynamics worth sampling",
       {"Permutation::irreducible"},
       {1}},
      {"keane-condition",
       "orbits of discontinuities avoid discontinuities; rational samples "
       "violate it only at depths that grow with the denominator",
       {"Iet::keane_check"},
       {1}},
      {"power-piecewise-structure",
       "T^n is a piecewise translation with at most n(d-1)+1 pieces, "
       "computed exactly and canonically",
       {"to_piecewise", "PiecewiseGrid::power"},
       {1, 2}},
      {"induction-matrix-identity",
       "lengths(T) = M(T,n) * lengths(R^n T) entrywise over a common "
       "denominator, at every step, with det M = +-1",
       {"rv_step", "expand", "RvState::identity_holds"},
       {1}},
      {"rauzy-class-closure",
       "irreducible permutations split into finite classes closed under "
       "both induction operations",
       {"RauzyClass::of"},
       {3, 4}},
      {"matrix-balance",
       "balance(M) = max column-sum ratio; matrices ending in a positive "
       "word are balanced by the word's entry ratio",
       {"balance", "IntMatrix::balance"},
       {8}},
      {"balance-recurrence",
       "from any stage, the expansion rebalances with probability bounded "
       "below before the norm grows by K^d",
       {"balance_probe"},
       {8}},
      {"acceptable-pairs",
       "words ending in the canonical positive suffix omega_i mark "
       "acceptable pairs (M, C_max)",
       {"AcceptableWordTable::build", "detect_acceptable"},
       {4, 5}},
      {"acceptable-multiplicity",
       "one C_max column extends to at most r acceptable pairs; exact "
       "|C_max| collisions stay bounded in the census",
       {"detect_acceptable", "summarize"},
       {4}},
      {"cylinder-measure-law",
       "the simplex measure of a matrix cylinder is proportional to the "
       "product of inverse column sums; fixed-depth cylinders sum to 1",
       {"cylinder_measure", "enumerate_cylinders"},
       {3}},
      {"rigidity-defect",
       "integral |T^n x - x| dx computed exactly; equals 2 beta (1 - beta) "
       "with beta = {n alpha} for rotations",
       {"rigidity_defect", "scan_rigidity"},
       {2}},
      {"rigidity-scarcity",
       "the measure of IETs sharing an acceptable |C_max| value decays like "
       "1/|C_max|; the census slope sits near -1",
       {"summarize", "run_census"},
       {4}},
      {"dyadic-rigidity-density",
       "a positive fraction of dyadic windows carries an expected rigidity "
       "time for most samples",
       {"detect_expected", "dyadic_census_of", "run_census"},
       {5}},
      {"expected-rigidity-soundness",
       "acceptable steps whose renormalized IET concentrates length above "
       "1 - eps/2 on the C_max column yield defects at most ~2 eps",
       {"detect_expected", "rigidity_defect"},
       {6}},
      {"rigidity-in-sparse-sets",
       "density-0.99 predicates still contain rigidity times for nearly "
       "every sample; scarcity keeps the exceptional mass small",
       {"run_census", "DensityPredicate"},
       {7}},
      {"spectral-moments",
       "c_n = <f, f o T^n> computed by exact interval overlap is the moment "
       "sequence of the spectral measure",
       {"correlation", "CorrelationSeries::compute"},
       {9}},
      {"wiener-dichotomy",
       "Cesaro averages of c_k^2 stay positive exactly for periodic data "
       "and decay for generic samples",
       {"wiener_average"},
       {9}},
      {"density-one-low-correlation",
       "away from a sparse exceptional set, correlations drop below any "
       "threshold in a window around each time",
       {"low_correlation_set"},
       {10}},
      {"rotation-rigidity-avoidance",
       "rotation rigidity times are the convergent denominators; excluding "
       "{n : ||n alpha|| < delta} removes them at density cost O(delta)",
       {"rotation_rigidity", "avoidance_set", "ContinuedFraction::of"},
       {7}},
      {"singularity-mechanism",
       "a rigidity time of S landing where the target's correlations vanish "
       "witnesses spectral singularity at desk scale",
       {"disjointness_witness"},
       {10}},
      {"product-unique-ergodicity",
       "products of generic pairs equidistribute rectangles from every "
       "start; the periodic negative control fails the same bound",
       {"product_orbit_average"},
       {11}},
      {"projection-marginals",
       "marginal frequencies of product orbits match the component measure",
       {"projection_check"},
       {11}},
  };
  return registry;
}

const std::vector<std::string>& out_of_scope_notes() {
  static const std::vector<std::string> notes = {
      "Disjointness of measure-preserving systems itself: consumed as "
      "theory; only its computable shadow (the witness search) is tested.",
      "Weak mixing of almost every IET: background, not recomputed.",
      "Total ergodicity of almost every IET: background, not recomputed.",
      "Residual-set (topological) refinements of the rigidity statements.",
      "Measure-zero sharing of rigidity sequences across classes "
      "(quantifies over all IETs at once).",
      "Induced maps of products as rectangle exchanges.",
      "Existence-only constants (density thresholds, column-count growth "
      "rates) are reported as data, never estimated as constants.",
      "Spectral theory beyond moment sequences: no L^2 spaces, no "
      "eigenfunction machinery, no measure decompositions.",
  };
  return notes;
}

std::map<std::string, std::vector<std::string>> scan_claim_annotations(
    const std::string& root) {
  namespace fs = std::filesystem;
  std::map<std::string, std::vector<std::string>> found;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext != ".hpp" && ext != ".cpp" && ext != ".h" && ext != ".cc")
      continue;
    std::ifstream in(entry.path());
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find("// claims:");
      if (pos == std::string::npos) continue;
      std::string rest = line.substr(pos + 10);
      std::string id;
      auto flush = [&] {
        if (!id.empty()) found[id].push_back(entry.path().filename().string());
        id.clear();
      };
      for (char c : rest) {
        if (isalnum(static_cast<unsigned char>(c)) || c == '-')
          id += c;
        else if (c == ',' || c == ' ')
          flush();
      }
      flush();
    }
  }
  return found;
}

std::string generate_claim_map(
    const std::vector<ClaimEntry>& registry,
    const std::map<std::string, std::vector<std::string>>& annotations,
    const std::vector<std::string>& out_of_scope) {
  std::ostringstream out;
  out << "# Claim map\n\n";
  out << "Quantitative claims the test suite verifies, the operations that\n"
         "implement them, and the acceptance criteria that gate them.\n"
         "Generated by `ietlab-claimmap`; do not edit by hand.\n\n";
  out << "| claim | statement | operations | acceptance | declared in |\n";
  out << "|---|---|---|---|---|\n";
  for (const ClaimEntry& entry : registry) {
    auto it = annotations.find(entry.id);
    if (it == annotations.end() || it->second.empty())
      throw UnmappedClaim("claim '" + entry.id +
                          "' has no implementing annotation");
    out << "| `" << entry.id << "` | " << entry.statement << " | ";
    for (size_t i = 0; i < entry.operations.size(); ++i)
      out << (i ? ", " : "") << "`" << entry.operations[i] << "`";
    out << " | ";
    for (size_t i = 0; i < entry.criteria.size(); ++i)
      out << (i ? ", " : "") << entry.criteria[i];
    out << " | ";
    std::vector<std::string> files = it->second;
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    for (size_t i = 0; i < files.size(); ++i)
      out << (i ? ", " : "") << files[i];
    out << " |\n";
  }
  out << "\n## Out of scope\n\n";
  for (const std::string& note : out_of_scope) out << "- " << note << "\n";
  return out.str();
}

}  // namespace ietlab
