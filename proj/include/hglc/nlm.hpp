#pragma once

// The multimodal Lambek calculus NL<> over a signature of binary modes
// and unary modalities. Antecedents are structured databases (binary
// brackets per mode, angle brackets per modality); some modes may be
// declared commutative and/or associative, which adds the structural
// rules (P), (A_l), (A_r) for them. `NLMProver` is a complete decision
// procedure: structural rules are absorbed into finite structural
// classes, and the logical rules strictly shrink the formula material.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hglc/verdict.hpp"

namespace hglc {

struct Signature {
  std::set<std::string> modes;        // binary modes I
  std::set<std::string> modalities;   // unary modalities J
  std::set<std::string> commutative;  // C, subset of I
  std::set<std::string> associative;  // A, subset of I

  // Requires C and A inside I and I disjoint from J. Signatures with more
  // than one associative mode are constructible (the rules make sense);
  // only the hypergraph embedding restricts |A| <= 1, and it checks that
  // itself.
  void validate() const;

  bool has_mode(const std::string& m) const { return modes.count(m) > 0; }
  bool has_modality(const std::string& j) const {
    return modalities.count(j) > 0;
  }
  bool is_commutative(const std::string& m) const {
    return commutative.count(m) > 0;
  }
  bool is_associative(const std::string& m) const {
    return associative.count(m) > 0;
  }
};

std::string signature_to_json(const Signature& sig);
Signature signature_from_json(const std::string& text);

enum class NLMKind { atom, prod, under, over, dia, box };

class NLMFormula;
using NLMFormulaPtr = std::shared_ptr<const NLMFormula>;

class NLMFormula {
public:
  // Names of atoms, modes and modalities are word-shaped ([A-Za-z0-9_]+),
  // which keeps the text syntax and key strings unambiguous.
  static NLMFormulaPtr atom(const std::string& name);
  static NLMFormulaPtr prod(const std::string& mode, NLMFormulaPtr a,
                            NLMFormulaPtr b);  // A *i B
  static NLMFormulaPtr under(const std::string& mode, NLMFormulaPtr b,
                             NLMFormulaPtr a);  // B \i A
  static NLMFormulaPtr over(const std::string& mode, NLMFormulaPtr a,
                            NLMFormulaPtr b);  // A /i B
  static NLMFormulaPtr dia(const std::string& modality, NLMFormulaPtr a);
  static NLMFormulaPtr box(const std::string& modality, NLMFormulaPtr a);

  NLMKind kind() const { return kind_; }
  const std::string& index() const { return index_; }  // mode or modality
  const std::string& name() const { return index_; }   // atom name
  // prod: left * right; under: left \ right; over: left / right.
  const NLMFormulaPtr& left() const { return left_; }
  const NLMFormulaPtr& right() const { return right_; }
  const NLMFormulaPtr& arg() const { return left_; }  // dia/box child
  const std::string& key() const { return key_; }
  int connective_count() const { return connectives_; }

private:
  NLMFormula() = default;
  NLMKind kind_ = NLMKind::atom;
  std::string index_;
  NLMFormulaPtr left_, right_;
  std::string key_;
  int connectives_ = 0;
};

inline bool same_nlm_formula(const NLMFormulaPtr& a, const NLMFormulaPtr& b) {
  return a == b || (a && b && a->key() == b->key());
}

enum class DBKind { leaf, pair, angle };

class Database;
using DatabasePtr = std::shared_ptr<const Database>;

class Database {
public:
  static DatabasePtr leaf(NLMFormulaPtr f);
  static DatabasePtr pair(const std::string& mode, DatabasePtr l,
                          DatabasePtr r);
  static DatabasePtr angle(const std::string& modality, DatabasePtr d);

  DBKind kind() const { return kind_; }
  const std::string& index() const { return index_; }
  const NLMFormulaPtr& formula() const { return formula_; }  // leaf
  const DatabasePtr& left() const { return left_; }
  const DatabasePtr& right() const { return right_; }
  const DatabasePtr& child() const { return left_; }  // angle
  const std::string& key() const { return key_; }
  int leaf_count() const { return leaves_; }
  int connective_count() const { return connectives_; }  // inside leaf formulas
  int bracket_count() const { return brackets_; }

private:
  Database() = default;
  DBKind kind_ = DBKind::leaf;
  std::string index_;
  NLMFormulaPtr formula_;
  DatabasePtr left_, right_;
  std::string key_;
  int leaves_ = 0, connectives_ = 0, brackets_ = 0;
};

inline bool same_database(const DatabasePtr& a, const DatabasePtr& b) {
  return a == b || (a && b && a->key() == b->key());
}

struct NLMSequent {
  DatabasePtr antecedent;
  NLMFormulaPtr succedent;
};

// --- contexts ---

// A position in a database: 0 = left / angle child, 1 = right, root = {}.
using DBPath = std::vector<int>;

struct DBContext {
  DBPath path;
  DatabasePtr sub;
};

// Every position of db, in preorder (root first).
std::vector<DBContext> contexts(const DatabasePtr& db);

DatabasePtr subterm_at(const DatabasePtr& db, const DBPath& path);
DatabasePtr plug(const DatabasePtr& db, const DBPath& path,
                 const DatabasePtr& replacement);

// --- structural rules ---

enum class NLMRule {
  ax,
  prod_l, prod_r,
  under_l, under_r,
  over_l, over_r,
  dia_l, dia_r,
  box_l, box_r,
  perm,      // (P)   at a commutative mode
  assoc_l,   // (A_l) ((x,y),z) => (x,(y,z))
  assoc_r,   // (A_r) (x,(y,z)) => ((x,y),z)
};

const char* nlm_rule_name(NLMRule r);

// All databases reachable from db by the structural rules of sig, sorted
// by key and deduplicated. Finite: permutation and reassociation preserve
// the leaf material.
std::vector<DatabasePtr> structural_class(const DatabasePtr& db,
                                          const Signature& sig);

// The key-least member of the structural class: a canonical representative.
DatabasePtr class_representative(const DatabasePtr& db, const Signature& sig);

struct StructStep {
  NLMRule rule;  // perm, assoc_l or assoc_r
  DBPath path;
  DatabasePtr result;  // database after the step
};

// A concrete chain of single structural-rule applications from `from` to
// `to` (members of one structural class). Empty when from == to.
std::vector<StructStep> structural_path(const DatabasePtr& from,
                                        const DatabasePtr& to,
                                        const Signature& sig);

// --- derivations ---

struct NLMDerivation {
  NLMSequent conclusion;
  NLMRule rule;
  std::string index;  // mode or modality of the instance, "" for (ax)
  DBPath path;        // active position in the conclusion antecedent
  std::vector<NLMDerivation> premises;
};

// Validates one rule application (the root of d against its premises).
bool check_rule_nlm(const NLMDerivation& d, const Signature& sig,
                    std::string* why = nullptr);
// Validates the whole tree.
bool check_derivation_nlm(const NLMDerivation& d, const Signature& sig,
                          std::string* why = nullptr);

struct NLMProveResult {
  Verdict verdict = Verdict::underivable;
  std::optional<NLMDerivation> derivation;
};

class NLMProver {
public:
  explicit NLMProver(Signature sig);
  const Signature& sig() const { return sig_; }

  // Complete backward search; the default budget exceeds the depth any
  // sequent of sane size can need (each logical rule removes a
  // connective), so `exhausted` only shows up with tiny explicit budgets.
  NLMProveResult prove(const NLMSequent& s, int budget = 64);

private:
  struct Entry {
    Verdict verdict;
    std::optional<NLMDerivation> derivation;
    int budget;  // budget the verdict was computed with (for exhausted)
  };
  NLMProveResult search(const NLMSequent& s, int budget);

  Signature sig_;
  std::map<std::string, Entry> memo_;
};

}  // namespace hglc
