#pragma once

// Independent reference implementations the tests check the library
// against: brute-force isomorphism, a direct rewrite closure for
// structural classes, a forward (bottom-up) derivability closure for
// NL<>, and seeded random generators.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hglc/equiv.hpp"
#include "hglc/nlm.hpp"

namespace oracle {

using namespace hglc;

// Try every node bijection; ext must map pointwise and edges must match
// as a multiset of (label, mapped attachment) rows. Exponential, fine for
// graphs up to ~8 nodes.
inline bool brute_isomorphic(const Hypergraph& a, const Hypergraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count() ||
      a.ext().size() != b.ext().size())
    return false;
  std::vector<int> perm(a.node_count());
  std::iota(perm.begin(), perm.end(), 0);
  auto rows = [](const Hypergraph& g,
                 const std::vector<int>* map) {
    std::multiset<std::string> out;
    for (int e = 0; e < g.edge_count(); ++e) {
      std::string row = label_key(g.edge(e).label) + "|";
      for (int v : g.edge(e).att)
        row += std::to_string(map ? (*map)[v] : v) + ",";
      out.insert(row);
    }
    return out;
  };
  std::multiset<std::string> want = rows(b, nullptr);
  do {
    bool ok = true;
    for (size_t i = 0; i < a.ext().size(); ++i)
      if (perm[a.ext()[i]] != b.ext()[i]) {
        ok = false;
        break;
      }
    if (ok && rows(a, &perm) == want) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// --- seeded random values ---

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  // rank is encoded in the name to keep the alphabet coherent
  FormulaPtr prim(int rank) {
    return Formula::primitive(
        "a" + std::to_string(pick(0, 3)) + "r" + std::to_string(rank), rank);
  }

  std::vector<FormulaPtr> word(int min_len, int max_len) {
    int n = pick(min_len, max_len);
    std::vector<FormulaPtr> out;
    for (int i = 0; i < n; ++i) out.push_back(prim(2));
    return out;
  }

  Hypergraph graph(int max_nodes, int max_edges, int max_rank,
                   int ext_count) {
    int n = std::max(ext_count, pick(std::max(1, ext_count), max_nodes));
    int m = pick(0, max_edges);
    std::vector<Edge> edges;
    for (int e = 0; e < m; ++e) {
      int r = pick(1, max_rank);
      Edge edge;
      edge.label = prim(r);
      for (int i = 0; i < r; ++i) edge.att.push_back(pick(0, n - 1));
      edges.push_back(std::move(edge));
    }
    std::vector<int> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<int> ext(nodes.begin(), nodes.begin() + ext_count);
    return Hypergraph(n, std::move(edges), std::move(ext));
  }
};

// --- structural class by direct rewriting ---

// one-step rewrites of a database, written straight off the postulates
inline std::vector<DatabasePtr> rewrite_steps(const DatabasePtr& db,
                                              const Signature& sig) {
  std::vector<DatabasePtr> out;
  if (db->kind() == DBKind::pair) {
    const std::string& m = db->index();
    const DatabasePtr& l = db->left();
    const DatabasePtr& r = db->right();
    if (sig.is_commutative(m)) out.push_back(Database::pair(m, r, l));
    if (sig.is_associative(m)) {
      if (l->kind() == DBKind::pair && l->index() == m)
        out.push_back(Database::pair(
            m, l->left(), Database::pair(m, l->right(), r)));
      if (r->kind() == DBKind::pair && r->index() == m)
        out.push_back(Database::pair(
            m, Database::pair(m, l, r->left()), r->right()));
    }
    for (const DatabasePtr& nl : rewrite_steps(l, sig))
      out.push_back(Database::pair(m, nl, r));
    for (const DatabasePtr& nr : rewrite_steps(r, sig))
      out.push_back(Database::pair(m, l, nr));
  } else if (db->kind() == DBKind::angle) {
    for (const DatabasePtr& nc : rewrite_steps(db->child(), sig))
      out.push_back(Database::angle(db->index(), nc));
  }
  return out;
}

inline std::map<std::string, DatabasePtr> brute_class(const DatabasePtr& db,
                                                      const Signature& sig) {
  std::map<std::string, DatabasePtr> seen{{db->key(), db}};
  std::vector<DatabasePtr> frontier{db};
  while (!frontier.empty()) {
    std::vector<DatabasePtr> next;
    for (const DatabasePtr& d : frontier)
      for (const DatabasePtr& n : rewrite_steps(d, sig))
        if (seen.emplace(n->key(), n).second) next.push_back(n);
    frontier = std::move(next);
  }
  return seen;
}

// --- forward (bottom-up) derivability closure ---

// Saturates the set of derivable sequents over a finite space with the
// rules applied premises-to-conclusion. The space must be closed under
// backward proof steps, which holds for "all sequents whose connective +
// bracket total is <= K": every rule preserves or lowers that total going
// premise-ward. The prover must agree with membership on every sequent of
// the space.
struct ForwardClosure {
  Signature sig;
  std::vector<DatabasePtr> dbs;
  std::vector<NLMFormulaPtr> formulas;
  std::map<std::string, int> db_index;
  std::map<std::string, int> f_index;
  std::set<std::pair<int, int>> derivable;

  static std::string seq_key(const DatabasePtr& d, const NLMFormulaPtr& f) {
    return d->key() + " => " + f->key();
  }

  ForwardClosure(const EnumerationSpec& spec) : sig(spec.sig) {
    EnumerationSpec s = spec;
    // make depth and leaf bounds non-binding; the connective total is the
    // only cap, so the space is backward-closed
    s.max_formula_depth = s.max_total_connectives;
    s.max_database_leaves = s.max_total_connectives + 1;
    formulas = enumerate_formulas(s);
    dbs = enumerate_databases(s);
    for (size_t i = 0; i < dbs.size(); ++i) db_index[dbs[i]->key()] = i;
    for (size_t i = 0; i < formulas.size(); ++i)
      f_index[formulas[i]->key()] = i;
    saturate(s.max_total_connectives);
  }

  int db_id(const DatabasePtr& d) const {
    auto it = db_index.find(d->key());
    return it == db_index.end() ? -1 : it->second;
  }
  int f_id(const NLMFormulaPtr& f) const {
    auto it = f_index.find(f->key());
    return it == f_index.end() ? -1 : it->second;
  }

  bool add(const DatabasePtr& d, const NLMFormulaPtr& f) {
    int di = db_id(d), fi = f_id(f);
    if (di < 0 || fi < 0) return false;
    return derivable.insert({di, fi}).second;
  }

  bool has(const DatabasePtr& d, const NLMFormulaPtr& f) const {
    int di = db_id(d), fi = f_id(f);
    return di >= 0 && fi >= 0 && derivable.count({di, fi}) > 0;
  }

  void saturate(int cap) {
    (void)cap;
    for (const NLMFormulaPtr& f : formulas) add(Database::leaf(f), f);
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<std::pair<int, int>> snapshot(derivable.begin(),
                                                derivable.end());
      // unary consequences of one derivable sequent
      for (auto [di, fi] : snapshot) {
        const DatabasePtr& d = dbs[di];
        const NLMFormulaPtr& f = formulas[fi];
        // structural steps preserve the succedent
        for (const DatabasePtr& r : rewrite_steps(d, sig))
          grew |= add(r, f);
        // right rules with one premise
        for (const std::string& j : sig.modalities) {
          grew |= add(Database::angle(j, d), NLMFormula::dia(j, f));
          if (d->kind() == DBKind::angle && d->index() == j)
            grew |= add(d->child(), NLMFormula::box(j, f));
        }
        for (const std::string& m : sig.modes) {
          if (d->kind() == DBKind::pair && d->index() == m) {
            if (d->left()->kind() == DBKind::leaf)
              grew |= add(d->right(),
                          NLMFormula::under(m, d->left()->formula(), f));
            if (d->right()->kind() == DBKind::leaf)
              grew |= add(d->left(),
                          NLMFormula::over(m, f, d->right()->formula()));
          }
        }
        // left rules that only rewrite the antecedent
        for (const DBContext& c : contexts(d)) {
          const DatabasePtr& sub = c.sub;
          if (sub->kind() == DBKind::pair && sub->left()->kind() == DBKind::leaf &&
              sub->right()->kind() == DBKind::leaf) {
            grew |= add(
                plug(d, c.path,
                     Database::leaf(NLMFormula::prod(
                         sub->index(), sub->left()->formula(),
                         sub->right()->formula()))),
                f);
          }
          if (sub->kind() == DBKind::angle &&
              sub->child()->kind() == DBKind::leaf) {
            grew |= add(plug(d, c.path,
                             Database::leaf(NLMFormula::dia(
                                 sub->index(), sub->child()->formula()))),
                        f);
          }
          if (sub->kind() == DBKind::leaf) {
            for (const std::string& j : sig.modalities)
              grew |= add(
                  plug(d, c.path,
                       Database::angle(j, Database::leaf(NLMFormula::box(
                                              j, sub->formula())))),
                  f);
          }
        }
      }
      // two-premise rules
      std::vector<std::pair<int, int>> snap2(derivable.begin(),
                                             derivable.end());
      for (auto [di1, fi1] : snap2) {
        for (auto [di2, fi2] : snap2) {
          const DatabasePtr& d1 = dbs[di1];
          const NLMFormulaPtr& f1 = formulas[fi1];
          const DatabasePtr& d2 = dbs[di2];
          const NLMFormulaPtr& f2 = formulas[fi2];
          for (const std::string& m : sig.modes) {
            // product right
            grew |= add(Database::pair(m, d1, d2),
                        NLMFormula::prod(m, f1, f2));
            // division left: d1 proves C from a context holding leaf(A),
            // d2 proves the argument B
            for (const DBContext& c : contexts(d1)) {
              if (c.sub->kind() != DBKind::leaf) continue;
              const NLMFormulaPtr& a = c.sub->formula();
              grew |= add(
                  plug(d1, c.path,
                       Database::pair(
                           m, d2,
                           Database::leaf(NLMFormula::under(m, f2, a)))),
                  f1);
              grew |= add(
                  plug(d1, c.path,
                       Database::pair(
                           m,
                           Database::leaf(NLMFormula::over(m, a, f2)),
                           d2)),
                  f1);
            }
          }
        }
      }
    }
  }
};

}  // namespace oracle
