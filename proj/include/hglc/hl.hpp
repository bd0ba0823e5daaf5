#pragma once

// The hypergraph Lambek calculus: sequents H -> A where H is a hypergraph
// labeled with formulas and rk(H) = rk(A), with rules
//
//   (ax)  A* -> A
//   (xL)  from H[e/M] -> A          infer H[e/x(M)*] -> A
//   (xR)  from H_i -> lab_M(m_i)    infer M[m_1/H_1,...,m_l/H_l] -> x(M)
//   (/L)  from H[e/N*] -> A and H_i -> lab_D(d_i)
//         infer H[e/D[hole/div(N,D)*, d_1/H_1,...,d_k/H_k]] -> A
//   (/R)  from D[hole/F] -> N       infer F -> div(N,D)
//
// Backward search enumerates rule applications bottom-up; the inverse
// replacement matcher generates candidate decompositions liberally and
// verifies each one by reconstructing the conclusion, so every emitted
// expansion is a genuine rule instance.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hglc/formula.hpp"
#include "hglc/verdict.hpp"

namespace hglc {

struct HLSequent {
  Hypergraph antecedent;
  FormulaPtr succedent;

  // Validates rk(antecedent) == rk(succedent) and that antecedent labels
  // are formulas (no hole labels).
  HLSequent(Hypergraph h, FormulaPtr a);

  std::string key() const;  // canonical, for memoization
};

enum class HLRule { ax, times_l, times_r, div_l, div_r };

const char* hl_rule_name(HLRule r);

struct HLDerivation {
  HLSequent conclusion;
  HLRule rule;
  std::vector<HLDerivation> premises;
  // times_l: id of the product edge in the conclusion antecedent.
  // div_l:   id of the numerator edge in premise 0's antecedent.
  int edge = -1;
  // div_l: the division formula div(N, D) being introduced.
  FormulaPtr major;
};

// Validates the root rule application of d modulo isomorphism; premises
// are taken at face value. On failure *why receives a diagnostic.
bool check_rule(const HLDerivation& d, std::string* why = nullptr);
bool check_derivation(const HLDerivation& d, std::string* why = nullptr);

struct HLExpansion {
  HLRule rule;
  std::vector<HLSequent> premises;
  int edge = -1;
  FormulaPtr major;
};

// All one-step backward rule applications whose conclusion is s. For
// (xR) and (/L) this enumerates every decomposition of the antecedent,
// including degenerate ones whose premises are hopeless; each result is
// verified by forward reconstruction before being returned.
std::vector<HLExpansion> backward_expansions(const HLSequent& s);

struct HLProveResult {
  Verdict verdict = Verdict::underivable;
  std::optional<HLDerivation> derivation;
};

// Memoizing backward prover. Verdicts are keyed on the canonical form of
// the sequent, so isomorphic sequents share one entry. The memo table is
// guarded by a mutex; formulas and graphs are immutable, so a prover can
// be shared by threads proving disjoint goals.
class HLProver {
public:
  HLProveResult prove(const HLSequent& s, int budget = 64);

  // Both sides of the residuation equivalence: F -> div(N,D) on the left,
  // D[hole/F] -> N on the right. The two verdicts are computed by
  // independent searches of the two sequents.
  std::pair<Verdict, Verdict> residuation_check(const Hypergraph& f,
                                                const FormulaPtr& n,
                                                const Hypergraph& d,
                                                int budget = 64);

  // Oracle for the atom-succedent collapse: if every antecedent label is
  // skeleton-free and has head {p}, a derivable H -> p forces H to be the
  // handle of p. Returns `inapplicable` when the precondition fails.
  enum class Lemma1 { inapplicable, holds, fails, exhausted };
  Lemma1 lemma1_check(const Hypergraph& h, const FormulaPtr& p,
                      int budget = 64);

private:
  struct Entry {
    Verdict verdict;
    std::optional<HLDerivation> derivation;
    int budget;
  };
  HLProveResult search(const HLSequent& s, int budget);

  std::map<std::string, Entry> memo_;
  std::mutex mu_;
};

// --- classical Lambek calculus, for the string-graph embedding ---

class LCFormula;
using LCFormulaPtr = std::shared_ptr<const LCFormula>;

class LCFormula {
public:
  enum class Kind { atom, prod, over, under };
  static LCFormulaPtr atom(const std::string& name);
  static LCFormulaPtr prod(LCFormulaPtr a, LCFormulaPtr b);   // A . B
  static LCFormulaPtr over(LCFormulaPtr a, LCFormulaPtr b);   // A / B
  static LCFormulaPtr under(LCFormulaPtr b, LCFormulaPtr a);  // B \ A

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const LCFormulaPtr& left() const { return left_; }
  const LCFormulaPtr& right() const { return right_; }

private:
  LCFormula() = default;
  Kind kind_ = Kind::atom;
  std::string name_;
  LCFormulaPtr left_, right_;
};

// tr(p) = p with rank 2; tr(A.B) = x(SG(tr A, tr B));
// tr(A/B) = div(tr A, SG(hole, tr B)); tr(B\A) = div(tr A, SG(tr B, hole)).
FormulaPtr tr_classic(const LCFormulaPtr& f);

// Lambek sequent A_1,...,A_n -> B as SG(tr A_1 ... tr A_n) -> tr B.
HLSequent tr_classic_sequent(const std::vector<LCFormulaPtr>& antecedent,
                             const LCFormulaPtr& succedent);

}  // namespace hglc
