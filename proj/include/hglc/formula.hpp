#pragma once

// HL formulas, the edge labels of the hypergraph calculus.
//
//   F ::= p          primitive of some rank
//       | $_d        hole of rank d (only inside division denominators)
//       | x(M)       product over a formula-labeled hypergraph M
//       | div(N, D)  division; D has exactly one hole edge, rank(N)=rank(D)
//
// rk(p) is declared per name, rk($_d)=d, rk(x(M))=rk(M), and rk(div(N,D))
// is the rank of D's hole edge. Formulas are immutable and compared
// structurally, with graph bodies compared up to isomorphism; `key()` is
// the identity string realizing that comparison.

#include <set>
#include <string>
#include <vector>

#include "hglc/hypergraph.hpp"

namespace hglc {

enum class FormulaKind { primitive, hole, product, division };

class Formula {
public:
  static FormulaPtr primitive(const std::string& name, int rank);
  static FormulaPtr hole(int rank);
  static FormulaPtr product(Hypergraph body);  // no hole labels allowed in body
  static FormulaPtr division(FormulaPtr numerator, Hypergraph denominator);

  FormulaKind kind() const { return kind_; }
  int rank() const { return rank_; }
  const std::string& key() const { return key_; }
  const Alphabet& alphabet() const { return alphabet_; }

  const std::string& name() const;        // primitive
  const Hypergraph& body() const;         // product: M, division: D
  const FormulaPtr& numerator() const;    // division: N
  int hole_edge() const;                  // division: id of the hole edge in D

  bool operator==(const Formula& other) const { return key_ == other.key_; }

private:
  Formula() = default;

  FormulaKind kind_ = FormulaKind::primitive;
  int rank_ = 0;
  std::string name_;
  Hypergraph body_;
  FormulaPtr numerator_;
  int hole_edge_ = -1;
  std::string key_;
  Alphabet alphabet_;
};

inline bool same_formula(const FormulaPtr& a, const FormulaPtr& b) {
  return a == b || (a && b && a->key() == b->key());
}

// Subformulas of f (f itself, edge labels of bodies, and so on),
// deduplicated structurally. Holes are not subformulas.
std::vector<FormulaPtr> subformulas(const FormulaPtr& f);

// head(p) = {p}; head(div(N,D)) = head(N); head(x(M)) = union of heads of
// the labels of M. Returned as primitive formulas, deduplicated.
std::vector<FormulaPtr> head(const FormulaPtr& f);

// True when no subformula is a product over an edge-free graph.
bool is_skeleton_free(const FormulaPtr& f);

}  // namespace hglc
