#pragma once

#include "nangle/engine.hpp"

namespace nangle {

struct SuiteParams {
  int n = 3;
  std::uint32_t prime = 5;
  int trials = 100;
  int max_dim = 3;
  int deg_lo = -2;
  int deg_hi = 2;
  std::uint64_t seed = 0;
  bool parallel = true;
};

SuiteParams validate_params(SuiteParams p);

struct TrialRecord {
  std::uint64_t seed = 0;
  bool passed = true;
};

struct Witness {
  std::string check;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string detail;
  std::string payload;  // offending diagram(s) in the exchange format
};

struct CheckResult {
  std::string name;
  int trials = 0;
  int passes = 0;
  int failures = 0;
  std::vector<TrialRecord> records;
  std::vector<Witness> witnesses;
};

struct Report {
  SuiteParams params;
  std::vector<CheckResult> checks;
  std::vector<std::string> model_assumptions;

  int total_trials() const;
  int total_failures() const;
  bool all_passed() const { return total_failures() == 0; }
};

// Closure checks: sums, summands, conjugations, trivial sequences, first-map
// completions are all n-angles.
CheckResult check_n1(const SuiteParams& params);
// Weak-isomorphism closure, one direction, including the diagonal
// construction whose tail components are genuinely non-invertible.
CheckResult check_n1_star(const SuiteParams& params);
// Rotations in both directions preserve membership; n-fold rotation is the
// shift up to the accumulated sign.
CheckResult check_n2(const SuiteParams& params);
// Left rotations only.
CheckResult check_n2_star(const SuiteParams& params);
// Every commuting first square completes to a morphism.
CheckResult check_n3(const SuiteParams& params);
// Completions can be chosen with exact mapping cones.
CheckResult check_n4(const SuiteParams& params);
// Both octahedron output properties, plus the cone-from-octahedron round
// trip with the displayed connecting matrix.
CheckResult check_n4_star(const SuiteParams& params);
// n = 3: theta square, wrap relation, and a homotopy cartesian witness for
// the middle square.
CheckResult check_tr4(const SuiteParams& params);

/// Every check, on derived seeds; deterministic for fixed params regardless
/// of scheduling.
Report run_all(const SuiteParams& params);

/// Exactness and decomposition round-trip for a single stored sequence
/// (corrupted-fixture entry point of the command line).
CheckResult fixture_check(const NSeq& s);

std::string report_text(const Report& report);
std::string report_records(const Report& report);

/// Greedy witness minimization: drops trivial-piece summands of a generated
/// instance while the failure predicate persists. Returns the surviving
/// pieces (rebuild with pieces_to_seq + a derived conjugation).
std::vector<TrivialPiece> shrink_pieces(Fp fp, const GenParams& gen, std::uint64_t seed,
                                        std::vector<TrivialPiece> pieces,
                                        const std::function<bool(const NSeq&)>& still_fails);

}  // namespace nangle
