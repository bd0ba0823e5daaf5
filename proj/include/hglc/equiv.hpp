#pragma once

// Mechanical check of the embedding on an enumerated inventory: for every
// database Pi and formula T within the bounds, the NL<> verdict on
// Pi -> T must match the HL verdict on htree(Pi) -> mu(T), the translated
// sequent must be recognized back into the structural class of Pi, and
// atomic-succedent images feed the Lemma-1 oracle.

#include <cstdint>
#include <string>
#include <vector>

#include "hglc/embed.hpp"

namespace hglc {

struct EnumerationSpec {
  std::vector<std::string> atoms;
  Signature sig;
  int max_formula_depth = 2;
  int max_database_leaves = 3;
  // cap on connectives(leaves of Pi) + brackets(Pi) + connectives(T) per
  // sequent, which keeps the joint instance space desk-scale; the depth
  // and leaf bounds alone admit astronomically many pairs
  int max_total_connectives = 4;
  int budget = 64;
};

// All formulas within the depth bound whose connective count fits the
// cap, ordered by connective count then key.
std::vector<NLMFormulaPtr> enumerate_formulas(const EnumerationSpec& spec);

// All databases within the leaf bound whose leaf-connective + bracket
// total fits the cap, leaves drawn from enumerate_formulas; ordered by
// leaf count, then size, then key.
std::vector<DatabasePtr> enumerate_databases(const EnumerationSpec& spec);

struct EquivRecord {
  std::string sequent;  // printable NL<> sequent
  std::string nlm;      // verdict names
  std::string hl;
  std::string note;
};

struct EquivReport {
  std::int64_t total = 0;           // sequents enumerated
  std::int64_t formulas = 0;        // succedent inventory size
  std::int64_t databases = 0;
  std::int64_t derivable_both = 0;
  std::int64_t underivable_both = 0;
  std::int64_t roundtrips = 0;      // distinct translations recognized back
  std::int64_t lemma1_holds = 0;    // atomic succedents with the lemma
  std::int64_t lemma1_vacuous = 0;  //   applicable: derivable / underivable
  std::int64_t lemma1_inapplicable = 0;
  // verdict_counts[nlm][hl], indexed by Verdict order
  std::int64_t verdict_counts[3][3] = {};
  std::vector<EquivRecord> disagreements;
  std::vector<EquivRecord> exhausted_cases;
  std::vector<EquivRecord> roundtrip_failures;
  std::vector<EquivRecord> lemma1_failures;
  double seconds = 0.0;

  bool ok() const {
    return disagreements.empty() && exhausted_cases.empty() &&
           roundtrip_failures.empty() && lemma1_failures.empty();
  }
};

// Enumerates every (database, formula) pair within the spec and compares
// the two provers on it. Workers shard the sequent space; each worker
// owns its prover state and the merge is deterministic regardless of
// scheduling. Budget exhaustion is reported, never coerced to a verdict.
EquivReport run_equivalence(const EnumerationSpec& spec, int workers = 1);

std::string report_to_json(const EquivReport& report);

}  // namespace hglc
