#include "hglc/embed.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hglc {

EmbedCase classify(const Signature& sig) {
  sig.validate();
  if (sig.associative.size() > 1)
    throw error(error::code::signature,
                "at most one associative mode is embeddable");
  if (sig.associative.empty()) {
    if (sig.commutative.empty() && sig.modalities.empty())
      return EmbedCase::plain;
    return EmbedCase::commutative;
  }
  const std::string& o = *sig.associative.begin();
  return sig.is_commutative(o) ? EmbedCase::assoc_comm
                               : EmbedCase::assoc_only;
}

const char* embed_case_name(EmbedCase c) {
  switch (c) {
    case EmbedCase::plain: return "plain";
    case EmbedCase::commutative: return "commutative";
    case EmbedCase::assoc_comm: return "assoc_comm";
    case EmbedCase::assoc_only: return "assoc_only";
  }
  return "?";
}

FormulaPtr mode_label(const std::string& mode, const Signature& sig) {
  if (!sig.has_mode(mode))
    throw error(error::code::signature, "unknown mode '" + mode + "'");
  EmbedCase c = classify(sig);
  int rk;
  if (c == EmbedCase::assoc_only)
    rk = sig.is_associative(mode) ? 1 : sig.is_commutative(mode) ? 4 : 6;
  else
    rk = sig.is_associative(mode) || sig.is_commutative(mode) ? 2 : 3;
  return Formula::primitive("mode:" + mode, rk);
}

FormulaPtr modality_label(const std::string& modality, const Signature& sig) {
  if (!sig.has_modality(modality))
    throw error(error::code::signature,
                "unknown modality '" + modality + "'");
  return Formula::primitive("mod:" + modality,
                            classify(sig) == EmbedCase::assoc_only ? 4 : 2);
}

FormulaPtr atom_label(const std::string& atom, const Signature& sig) {
  if (atom.find(':') != std::string::npos)
    throw error(error::code::invalid, "atom names cannot contain ':'");
  return Formula::primitive(atom,
                            classify(sig) == EmbedCase::assoc_only ? 2 : 1);
}

// --- gadget builders ---

Hypergraph tree_branch(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b) {
  // nodes: 0 top, 1 left, 2 right
  return Hypergraph(
      3,
      {{Formula::primitive("mode:" + mode, 3), {0, 1, 2}},
       {a, {1}},
       {b, {2}}},
      {0});
}

Hypergraph shared_branch(const std::string& mode, const FormulaPtr& a,
                         const FormulaPtr& b) {
  // nodes: 0 top, 1 hub
  return Hypergraph(
      2,
      {{Formula::primitive("mode:" + mode, 2), {0, 1}}, {a, {1}}, {b, {1}}},
      {0});
}

Hypergraph unary_branch(const std::string& modality, const FormulaPtr& a) {
  return Hypergraph(
      2, {{Formula::primitive("mod:" + modality, 2), {0, 1}}, {a, {1}}}, {0});
}

Hypergraph hub_branch(const std::string& mode, const FormulaPtr& a,
                      const FormulaPtr& b) {
  // like shared_branch but external at the hub: nesting fuses hubs
  return Hypergraph(
      2,
      {{Formula::primitive("mode:" + mode, 2), {0, 1}}, {a, {1}}, {b, {1}}},
      {1});
}

Hypergraph wide_branch(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b) {
  // nodes: 0,1 external; 2,3 first slot; 4,5 second slot
  return Hypergraph(
      6,
      {{Formula::primitive("mode:" + mode, 6), {0, 1, 2, 3, 4, 5}},
       {a, {2, 3}},
       {b, {4, 5}}},
      {0, 1});
}

Hypergraph parallel_branch(const std::string& mode, const FormulaPtr& a,
                           const FormulaPtr& b) {
  // nodes: 0,1 external; 2,3 shared slot pair
  return Hypergraph(
      4,
      {{Formula::primitive("mode:" + mode, 4), {0, 1, 2, 3}},
       {a, {2, 3}},
       {b, {2, 3}}},
      {0, 1});
}

Hypergraph unary_wide_branch(const std::string& modality,
                             const FormulaPtr& a) {
  return Hypergraph(
      4,
      {{Formula::primitive("mod:" + modality, 4), {0, 1, 2, 3}},
       {a, {2, 3}}},
      {0, 1});
}

Hypergraph series_pair(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b) {
  // nodes: 0 entry, 1 middle, 2 exit; rank-1 marker on the middle
  return Hypergraph(
      3,
      {{Formula::primitive("mode:" + mode, 1), {1}}, {a, {0, 1}}, {b, {1, 2}}},
      {0, 2});
}

// --- translation ---

namespace {

FormulaPtr mu_impl(const NLMFormulaPtr& f, const Signature& sig,
                   EmbedCase cs) {
  switch (f->kind()) {
    case NLMKind::atom:
      return atom_label(f->name(), sig);
    case NLMKind::prod: {
      const std::string& m = f->index();
      if (!sig.has_mode(m))
        throw error(error::code::signature, "unknown mode '" + m + "'");
      FormulaPtr a = mu_impl(f->left(), sig, cs);
      FormulaPtr b = mu_impl(f->right(), sig, cs);
      if (cs == EmbedCase::assoc_only) {
        if (sig.is_associative(m))
          return Formula::product(series_pair(m, a, b));
        if (sig.is_commutative(m))
          return Formula::product(parallel_branch(m, a, b));
        return Formula::product(wide_branch(m, a, b));
      }
      if (sig.is_associative(m)) return Formula::product(hub_branch(m, a, b));
      if (sig.is_commutative(m))
        return Formula::product(shared_branch(m, a, b));
      return Formula::product(tree_branch(m, a, b));
    }
    case NLMKind::under: {  // B \m A
      const std::string& m = f->index();
      if (!sig.has_mode(m))
        throw error(error::code::signature, "unknown mode '" + m + "'");
      FormulaPtr b = mu_impl(f->left(), sig, cs);
      FormulaPtr a = mu_impl(f->right(), sig, cs);
      if (cs == EmbedCase::assoc_only) {
        FormulaPtr hole = Formula::hole(2);
        if (sig.is_associative(m))
          return Formula::division(a, series_pair(m, b, hole));
        if (sig.is_commutative(m))
          return Formula::division(a, parallel_branch(m, b, hole));
        return Formula::division(a, wide_branch(m, b, hole));
      }
      FormulaPtr hole = Formula::hole(1);
      if (sig.is_associative(m))
        return Formula::division(a, hub_branch(m, hole, b));
      if (sig.is_commutative(m))
        return Formula::division(a, shared_branch(m, b, hole));
      return Formula::division(a, tree_branch(m, b, hole));
    }
    case NLMKind::over: {  // A /m B
      const std::string& m = f->index();
      if (!sig.has_mode(m))
        throw error(error::code::signature, "unknown mode '" + m + "'");
      FormulaPtr a = mu_impl(f->left(), sig, cs);
      FormulaPtr b = mu_impl(f->right(), sig, cs);
      if (cs == EmbedCase::assoc_only) {
        FormulaPtr hole = Formula::hole(2);
        if (sig.is_associative(m))
          return Formula::division(a, series_pair(m, hole, b));
        if (sig.is_commutative(m))
          return Formula::division(a, parallel_branch(m, b, hole));
        return Formula::division(a, wide_branch(m, hole, b));
      }
      FormulaPtr hole = Formula::hole(1);
      if (sig.is_associative(m))
        return Formula::division(a, hub_branch(m, hole, b));
      if (sig.is_commutative(m))
        return Formula::division(a, shared_branch(m, b, hole));
      return Formula::division(a, tree_branch(m, hole, b));
    }
    case NLMKind::dia: {
      const std::string& j = f->index();
      if (!sig.has_modality(j))
        throw error(error::code::signature, "unknown modality '" + j + "'");
      FormulaPtr a = mu_impl(f->arg(), sig, cs);
      if (cs == EmbedCase::assoc_only)
        return Formula::product(unary_wide_branch(j, a));
      return Formula::product(unary_branch(j, a));
    }
    case NLMKind::box: {
      const std::string& j = f->index();
      if (!sig.has_modality(j))
        throw error(error::code::signature, "unknown modality '" + j + "'");
      FormulaPtr a = mu_impl(f->arg(), sig, cs);
      if (cs == EmbedCase::assoc_only)
        return Formula::division(a,
                                 unary_wide_branch(j, Formula::hole(2)));
      return Formula::division(a, unary_branch(j, Formula::hole(1)));
    }
  }
  throw error(error::code::invalid, "unknown formula kind");
}

Hypergraph htree_impl(const DatabasePtr& db, const Signature& sig,
                      EmbedCase cs) {
  switch (db->kind()) {
    case DBKind::leaf:
      return handle(mu_impl(db->formula(), sig, cs));
    case DBKind::pair: {
      const std::string& m = db->index();
      if (!sig.has_mode(m))
        throw error(error::code::signature, "unknown mode '" + m + "'");
      // build the gadget with throwaway slot labels, then substitute the
      // subtree graphs for the slots
      int slot_rank = cs == EmbedCase::assoc_only ? 2 : 1;
      FormulaPtr dummy = Formula::primitive("tmp:slot", slot_rank);
      Hypergraph gadget = [&] {
        if (cs == EmbedCase::assoc_only) {
          if (sig.is_associative(m)) return series_pair(m, dummy, dummy);
          if (sig.is_commutative(m)) return parallel_branch(m, dummy, dummy);
          return wide_branch(m, dummy, dummy);
        }
        if (sig.is_associative(m)) return hub_branch(m, dummy, dummy);
        if (sig.is_commutative(m)) return shared_branch(m, dummy, dummy);
        return tree_branch(m, dummy, dummy);
      }();
      return replace_many(gadget, {{1, htree_impl(db->left(), sig, cs)},
                                   {2, htree_impl(db->right(), sig, cs)}});
    }
    case DBKind::angle: {
      const std::string& j = db->index();
      if (!sig.has_modality(j))
        throw error(error::code::signature, "unknown modality '" + j + "'");
      int slot_rank = cs == EmbedCase::assoc_only ? 2 : 1;
      FormulaPtr dummy = Formula::primitive("tmp:slot", slot_rank);
      Hypergraph gadget = cs == EmbedCase::assoc_only
                              ? unary_wide_branch(j, dummy)
                              : unary_branch(j, dummy);
      return replace(gadget, 1, htree_impl(db->child(), sig, cs));
    }
  }
  throw error(error::code::invalid, "unknown database kind");
}

}  // namespace

FormulaPtr mu(const NLMFormulaPtr& f, const Signature& sig) {
  if (!f) throw error(error::code::invalid, "null formula");
  return mu_impl(f, sig, classify(sig));
}

Hypergraph htree(const DatabasePtr& db, const Signature& sig) {
  if (!db) throw error(error::code::invalid, "null database");
  return htree_impl(db, sig, classify(sig));
}

HLSequent translate_sequent(const NLMSequent& s, const Signature& sig) {
  if (!s.antecedent || !s.succedent)
    throw error(error::code::invalid, "incomplete sequent");
  return HLSequent(htree(s.antecedent, sig), mu(s.succedent, sig));
}

// --- inverse recognition ---

namespace {

bool has_prefix(const std::string& s, const char* p) {
  return s.rfind(p, 0) == 0;
}

// "mode:i" -> i for primitive labels, empty otherwise
std::string mode_of(const FormulaPtr& f) {
  if (f->kind() != FormulaKind::primitive) return "";
  const std::string& n = f->name();
  return has_prefix(n, "mode:") ? n.substr(5) : "";
}

std::string modality_of(const FormulaPtr& f) {
  if (f->kind() != FormulaKind::primitive) return "";
  const std::string& n = f->name();
  return has_prefix(n, "mod:") ? n.substr(4) : "";
}

NLMFormulaPtr parse_mu(const FormulaPtr& x, const Signature& sig,
                       EmbedCase cs);

// the unique structural edge of a gadget body, or -1
int structural_edge(const Hypergraph& b) {
  int se = -1;
  for (int e = 0; e < b.edge_count(); ++e) {
    const FormulaPtr& lab = b.edge(e).label;
    if (!mode_of(lab).empty() || !modality_of(lab).empty()) {
      if (se >= 0) return -1;
      se = e;
    }
  }
  return se;
}

// slot edges (with their ids) of a gadget body: everything but se
std::vector<int> slot_edges(const Hypergraph& b, int se) {
  std::vector<int> out;
  for (int e = 0; e < b.edge_count(); ++e)
    if (e != se) out.push_back(e);
  return out;
}

bool att_is(const Edge& e, const std::vector<int>& want) {
  return e.att == want;
}

// Parses the body of a product or the denominator of a division. Slots
// may be holes (for denominators); the callback receives the sub-labels
// in gadget order (first slot, second slot) and the mode/modality. A null
// return means the shape is not a gadget.
struct GadgetShape {
  std::string index;     // mode or modality name (unprefixed)
  bool is_modality = false;
  std::vector<FormulaPtr> slots;  // labels in gadget order
};

std::optional<GadgetShape> parse_gadget(const Hypergraph& b,
                                        const Signature& sig, EmbedCase cs) {
  int se = structural_edge(b);
  if (se < 0) return std::nullopt;
  const Edge& s = b.edge(se);
  std::vector<int> rest = slot_edges(b, se);
  GadgetShape out;

  std::string j = modality_of(s.label);
  if (!j.empty()) {
    if (!sig.has_modality(j)) return std::nullopt;
    out.index = j;
    out.is_modality = true;
    if (cs == EmbedCase::assoc_only) {
      // unary_wide_branch
      if (b.rank() != 2 || label_rank(s.label) != 4 || b.node_count() != 4 ||
          rest.size() != 1)
        return std::nullopt;
      if (b.ext() != std::vector<int>{s.att[0], s.att[1]}) return std::nullopt;
      if (!att_is(b.edge(rest[0]), {s.att[2], s.att[3]})) return std::nullopt;
      out.slots = {b.edge(rest[0]).label};
      return out;
    }
    // unary_branch
    if (b.rank() != 1 || label_rank(s.label) != 2 || b.node_count() != 2 ||
        rest.size() != 1)
      return std::nullopt;
    if (b.ext() != std::vector<int>{s.att[0]}) return std::nullopt;
    if (!att_is(b.edge(rest[0]), {s.att[1]})) return std::nullopt;
    out.slots = {b.edge(rest[0]).label};
    return out;
  }

  std::string m = mode_of(s.label);
  if (m.empty() || !sig.has_mode(m)) return std::nullopt;
  out.index = m;
  if (rest.size() != 2) return std::nullopt;

  if (cs == EmbedCase::assoc_only) {
    if (b.rank() != 2) return std::nullopt;
    if (sig.is_associative(m)) {
      // series_pair: marker on the middle node
      if (label_rank(s.label) != 1 || b.node_count() != 3)
        return std::nullopt;
      int mid = s.att[0];
      int x1 = b.ext()[0], x2 = b.ext()[1];
      if (mid == x1 || mid == x2 || x1 == x2) return std::nullopt;
      int first = -1, second = -1;
      for (int e : rest) {
        if (att_is(b.edge(e), {x1, mid})) first = e;
        else if (att_is(b.edge(e), {mid, x2})) second = e;
        else return std::nullopt;
      }
      if (first < 0 || second < 0) return std::nullopt;
      out.slots = {b.edge(first).label, b.edge(second).label};
      return out;
    }
    if (sig.is_commutative(m)) {
      // parallel_branch
      if (label_rank(s.label) != 4 || b.node_count() != 4)
        return std::nullopt;
      if (b.ext() != std::vector<int>{s.att[0], s.att[1]})
        return std::nullopt;
      for (int e : rest)
        if (!att_is(b.edge(e), {s.att[2], s.att[3]})) return std::nullopt;
      out.slots = {b.edge(rest[0]).label, b.edge(rest[1]).label};
      return out;
    }
    // wide_branch
    if (label_rank(s.label) != 6 || b.node_count() != 6) return std::nullopt;
    if (b.ext() != std::vector<int>{s.att[0], s.att[1]}) return std::nullopt;
    int first = -1, second = -1;
    for (int e : rest) {
      if (att_is(b.edge(e), {s.att[2], s.att[3]})) first = e;
      else if (att_is(b.edge(e), {s.att[4], s.att[5]})) second = e;
      else return std::nullopt;
    }
    if (first < 0 || second < 0) return std::nullopt;
    out.slots = {b.edge(first).label, b.edge(second).label};
    return out;
  }

  if (b.rank() != 1) return std::nullopt;
  if (sig.is_associative(m)) {
    // hub_branch: external node is the hub
    if (label_rank(s.label) != 2 || b.node_count() != 2) return std::nullopt;
    if (b.ext() != std::vector<int>{s.att[1]}) return std::nullopt;
    for (int e : rest)
      if (!att_is(b.edge(e), {s.att[1]})) return std::nullopt;
    out.slots = {b.edge(rest[0]).label, b.edge(rest[1]).label};
    return out;
  }
  if (sig.is_commutative(m)) {
    // shared_branch
    if (label_rank(s.label) != 2 || b.node_count() != 2) return std::nullopt;
    if (b.ext() != std::vector<int>{s.att[0]}) return std::nullopt;
    for (int e : rest)
      if (!att_is(b.edge(e), {s.att[1]})) return std::nullopt;
    out.slots = {b.edge(rest[0]).label, b.edge(rest[1]).label};
    return out;
  }
  // tree_branch
  if (label_rank(s.label) != 3 || b.node_count() != 3) return std::nullopt;
  if (b.ext() != std::vector<int>{s.att[0]}) return std::nullopt;
  int first = -1, second = -1;
  for (int e : rest) {
    if (att_is(b.edge(e), {s.att[1]})) first = e;
    else if (att_is(b.edge(e), {s.att[2]})) second = e;
    else return std::nullopt;
  }
  if (first < 0 || second < 0) return std::nullopt;
  out.slots = {b.edge(first).label, b.edge(second).label};
  return out;
}

NLMFormulaPtr parse_mu(const FormulaPtr& x, const Signature& sig,
                       EmbedCase cs) {
  switch (x->kind()) {
    case FormulaKind::primitive: {
      const std::string& n = x->name();
      if (n.find(':') != std::string::npos) return nullptr;
      if (label_rank(x) != (cs == EmbedCase::assoc_only ? 2 : 1))
        return nullptr;
      return NLMFormula::atom(n);
    }
    case FormulaKind::product: {
      auto shape = parse_gadget(x->body(), sig, cs);
      if (!shape) return nullptr;
      if (shape->is_modality) {
        NLMFormulaPtr a = parse_mu(shape->slots[0], sig, cs);
        return a ? NLMFormula::dia(shape->index, a) : nullptr;
      }
      NLMFormulaPtr a = parse_mu(shape->slots[0], sig, cs);
      NLMFormulaPtr b = parse_mu(shape->slots[1], sig, cs);
      return a && b ? NLMFormula::prod(shape->index, a, b) : nullptr;
    }
    case FormulaKind::division: {
      NLMFormulaPtr a = parse_mu(x->numerator(), sig, cs);
      if (!a) return nullptr;
      auto shape = parse_gadget(x->body(), sig, cs);
      if (!shape) return nullptr;
      if (shape->is_modality) {
        if (!label_is_hole(shape->slots[0])) return nullptr;
        return NLMFormula::box(shape->index, a);
      }
      bool h0 = label_is_hole(shape->slots[0]);
      bool h1 = label_is_hole(shape->slots[1]);
      if (h0 == h1) return nullptr;
      const std::string& m = shape->index;
      bool symmetric = cs == EmbedCase::assoc_only
                           ? sig.is_commutative(m)
                           : sig.is_commutative(m) || sig.is_associative(m);
      if (symmetric) {
        // B \c A and A /c B share one image; return the /-form
        NLMFormulaPtr b = parse_mu(shape->slots[h0 ? 1 : 0], sig, cs);
        return b ? NLMFormula::over(m, a, b) : nullptr;
      }
      if (h0) {
        NLMFormulaPtr b = parse_mu(shape->slots[1], sig, cs);
        return b ? NLMFormula::over(m, a, b) : nullptr;
      }
      NLMFormulaPtr b = parse_mu(shape->slots[0], sig, cs);
      return b ? NLMFormula::under(m, b, a) : nullptr;
    }
    default:
      return nullptr;
  }
}

// connected components of g's edges, cut at the given nodes; each
// component also records which cut nodes it touches
struct Piece {
  std::vector<int> edges;
  std::vector<int> internals;
  std::set<int> touches;
};

std::vector<Piece> pieces_cut_at(const Hypergraph& g,
                                 const std::set<int>& cut,
                                 const std::set<int>& skip_edges) {
  int m = g.edge_count();
  std::vector<int> uf(m);
  for (int i = 0; i < m; ++i) uf[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<std::vector<int>> at_node(g.node_count());
  for (int e = 0; e < m; ++e) {
    if (skip_edges.count(e)) continue;
    for (int v : g.edge(e).att) at_node[v].push_back(e);
  }
  for (int v = 0; v < g.node_count(); ++v) {
    if (cut.count(v)) continue;
    for (size_t i = 1; i < at_node[v].size(); ++i)
      uf[find(at_node[v][i])] = find(at_node[v][0]);
  }
  std::map<int, int> root_to;
  std::vector<Piece> out;
  for (int e = 0; e < m; ++e) {
    if (skip_edges.count(e)) continue;
    int r = find(e);
    auto it = root_to.find(r);
    if (it == root_to.end()) {
      it = root_to.emplace(r, static_cast<int>(out.size())).first;
      out.push_back({});
    }
    out[it->second].edges.push_back(e);
    for (int v : g.edge(e).att)
      if (cut.count(v)) out[it->second].touches.insert(v);
  }
  for (int v = 0; v < g.node_count(); ++v) {
    if (cut.count(v) || at_node[v].empty()) continue;
    out[root_to.at(find(at_node[v][0]))].internals.push_back(v);
  }
  return out;
}

// assemble pieces into a standalone graph with the given ext sequence
Hypergraph assemble(const Hypergraph& g, const std::vector<Piece*>& pieces,
                    const std::vector<int>& ext_nodes) {
  std::map<int, int> local;
  int n = 0;
  std::vector<int> ext;
  for (int v : ext_nodes) {
    auto it = local.find(v);
    if (it == local.end()) it = local.emplace(v, n++).first;
    ext.push_back(it->second);
  }
  std::vector<int> edge_ids;
  for (Piece* p : pieces) {
    for (int v : p->internals)
      if (!local.count(v)) local.emplace(v, n++);
    for (int e : p->edges) edge_ids.push_back(e);
  }
  std::sort(edge_ids.begin(), edge_ids.end());
  std::vector<Edge> edges;
  for (int e : edge_ids) {
    Edge ne;
    ne.label = g.edge(e).label;
    for (int v : g.edge(e).att) {
      auto it = local.find(v);
      if (it == local.end()) it = local.emplace(v, n++).first;
      ne.att.push_back(it->second);
    }
    edges.push_back(std::move(ne));
  }
  return Hypergraph(n, std::move(edges), std::move(ext));
}

std::optional<DatabasePtr> parse_htree(const Hypergraph& g,
                                       const Signature& sig, EmbedCase cs);

// verified recursive parse of one child graph
std::optional<DatabasePtr> parse_child(const Hypergraph& g,
                                       const std::vector<Piece*>& pieces,
                                       const std::vector<int>& ext_nodes,
                                       const Signature& sig, EmbedCase cs) {
  if (pieces.empty()) return std::nullopt;
  return parse_htree(assemble(g, pieces, ext_nodes), sig, cs);
}

std::optional<DatabasePtr> parse_htree(const Hypergraph& g,
                                       const Signature& sig, EmbedCase cs) {
  int want_rank = cs == EmbedCase::assoc_only ? 2 : 1;
  if (g.rank() != want_rank || g.edge_count() == 0) return std::nullopt;

  auto verified = [&](DatabasePtr db) -> std::optional<DatabasePtr> {
    if (db && isomorphic(htree_impl(db, sig, cs), g)) return db;
    return std::nullopt;
  };

  // leaf
  if (g.edge_count() == 1) {
    const FormulaPtr& lab = g.edge(0).label;
    if (!isomorphic(g, handle(lab))) return std::nullopt;
    NLMFormulaPtr t = parse_mu(lab, sig, cs);
    if (!t) return std::nullopt;
    return verified(Database::leaf(t));
  }

  if (cs != EmbedCase::assoc_only) {
    int root = g.ext()[0];

    // root gadget headed by a structural edge whose first node is the root
    for (int se = 0; se < g.edge_count(); ++se) {
      const FormulaPtr& lab = g.edge(se).label;
      const std::vector<int>& att = g.edge(se).att;
      std::string j = modality_of(lab);
      if (!j.empty() && sig.has_modality(j) && label_rank(lab) == 2 &&
          att[0] == root) {
        std::set<int> cut{att[1]};
        auto pieces = pieces_cut_at(g, cut, {se});
        std::vector<Piece*> all;
        for (auto& p : pieces) all.push_back(&p);
        bool sane = true;
        for (auto& p : pieces)
          if (!p.touches.count(att[1])) sane = false;
        if (!sane) continue;
        auto child = parse_child(g, all, {att[1]}, sig, cs);
        if (!child) continue;
        if (auto got = verified(Database::angle(j, *child))) return got;
        continue;
      }
      std::string m = mode_of(lab);
      if (m.empty() || !sig.has_mode(m)) continue;
      if (!sig.is_associative(m) && !sig.is_commutative(m) &&
          label_rank(lab) == 3 && att[0] == root) {
        // tree_branch: children hang at att[1] and att[2]
        if (att[1] == att[2] || att[1] == root || att[2] == root) continue;
        std::set<int> cut{att[1], att[2]};
        auto pieces = pieces_cut_at(g, cut, {se});
        std::vector<Piece*> lefts, rights;
        bool sane = true;
        for (auto& p : pieces) {
          bool tl = p.touches.count(att[1]) > 0;
          bool tr = p.touches.count(att[2]) > 0;
          if (tl == tr) { sane = false; break; }
          (tl ? lefts : rights).push_back(&p);
        }
        if (!sane) continue;
        auto l = parse_child(g, lefts, {att[1]}, sig, cs);
        auto r = parse_child(g, rights, {att[2]}, sig, cs);
        if (!l || !r) continue;
        if (auto got = verified(Database::pair(m, *l, *r))) return got;
        continue;
      }
      if (sig.is_commutative(m) && !sig.is_associative(m) &&
          label_rank(lab) == 2 && att[0] == root) {
        // shared_branch: both children at the hub; group the pieces
        int hub = att[1];
        if (hub == root) continue;
        auto pieces = pieces_cut_at(g, {hub}, {se});
        int n = static_cast<int>(pieces.size());
        if (n < 2 || n > 12) continue;
        for (int mask = 1; mask < (1 << n) - 1; mask += 2) {
          std::vector<Piece*> a, b;
          for (int i = 0; i < n; ++i)
            ((mask >> i) & 1 ? a : b).push_back(&pieces[i]);
          auto l = parse_child(g, a, {hub}, sig, cs);
          if (!l) continue;
          auto r = parse_child(g, b, {hub}, sig, cs);
          if (!r) continue;
          if (auto got = verified(Database::pair(m, *l, *r))) return got;
        }
        continue;
      }
    }

    // associative-commutative cluster: the root is a hub carrying
    // mode-edges (second node) and the flattened members
    if (cs == EmbedCase::assoc_comm) {
      const std::string& o = *sig.associative.begin();
      std::set<int> oedges;
      for (int e = 0; e < g.edge_count(); ++e) {
        const FormulaPtr& lab = g.edge(e).label;
        if (mode_of(lab) == o && label_rank(lab) == 2 &&
            g.edge(e).att[1] == root)
          oedges.insert(e);
      }
      if (!oedges.empty()) {
        auto pieces = pieces_cut_at(g, {root}, oedges);
        int s = static_cast<int>(pieces.size());
        if (s == static_cast<int>(oedges.size()) + 1 && s >= 2) {
          // private tops of the mode edges must be loose ends
          bool sane = true;
          std::vector<char> used(g.node_count(), 0);
          for (int e : oedges) {
            int top = g.edge(e).att[0];
            if (top == root || used[top]) { sane = false; break; }
            used[top] = 1;
          }
          for (auto& p : pieces)
            for (int v : p.internals)
              if (used[v]) sane = false;
          if (sane) {
            std::vector<DatabasePtr> members;
            for (auto& p : pieces) {
              auto c = parse_child(g, {&p}, {root}, sig, cs);
              if (!c) { sane = false; break; }
              members.push_back(*c);
            }
            if (sane) {
              std::sort(members.begin(), members.end(),
                        [](const DatabasePtr& a, const DatabasePtr& b) {
                          return a->key() < b->key();
                        });
              DatabasePtr comb = members.back();
              for (int i = s - 2; i >= 0; --i)
                comb = Database::pair(o, members[i], comb);
              if (auto got = verified(comb)) return got;
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  // --- assoc_only (rank 2) ---
  int x1 = g.ext()[0], x2 = g.ext()[1];
  if (x1 == x2) return std::nullopt;

  for (int se = 0; se < g.edge_count(); ++se) {
    const FormulaPtr& lab = g.edge(se).label;
    const std::vector<int>& att = g.edge(se).att;
    std::string j = modality_of(lab);
    if (!j.empty() && sig.has_modality(j) && label_rank(lab) == 4 &&
        att[0] == x1 && att[1] == x2) {
      std::set<int> cut{att[2], att[3]};
      auto pieces = pieces_cut_at(g, cut, {se});
      std::vector<Piece*> all;
      for (auto& p : pieces) all.push_back(&p);
      auto child = parse_child(g, all, {att[2], att[3]}, sig, cs);
      if (!child) continue;
      if (auto got = verified(Database::angle(j, *child))) return got;
      continue;
    }
    std::string m = mode_of(lab);
    if (m.empty() || !sig.has_mode(m)) continue;
    if (!sig.is_associative(m) && !sig.is_commutative(m) &&
        label_rank(lab) == 6 && att[0] == x1 && att[1] == x2) {
      std::set<int> cut{att[2], att[3], att[4], att[5]};
      auto pieces = pieces_cut_at(g, cut, {se});
      std::vector<Piece*> lefts, rights;
      bool sane = true;
      for (auto& p : pieces) {
        bool tl = p.touches.count(att[2]) || p.touches.count(att[3]);
        bool tr = p.touches.count(att[4]) || p.touches.count(att[5]);
        if (tl == tr) { sane = false; break; }
        (tl ? lefts : rights).push_back(&p);
      }
      if (!sane) continue;
      auto l = parse_child(g, lefts, {att[2], att[3]}, sig, cs);
      auto r = parse_child(g, rights, {att[4], att[5]}, sig, cs);
      if (!l || !r) continue;
      if (auto got = verified(Database::pair(m, *l, *r))) return got;
      continue;
    }
    if (sig.is_commutative(m) && label_rank(lab) == 4 && att[0] == x1 &&
        att[1] == x2) {
      std::set<int> cut{att[2], att[3]};
      auto pieces = pieces_cut_at(g, cut, {se});
      int n = static_cast<int>(pieces.size());
      if (n < 2 || n > 12) continue;
      for (int mask = 1; mask < (1 << n) - 1; mask += 2) {
        std::vector<Piece*> a, b;
        for (int i = 0; i < n; ++i)
          ((mask >> i) & 1 ? a : b).push_back(&pieces[i]);
        auto l = parse_child(g, a, {att[2], att[3]}, sig, cs);
        if (!l) continue;
        auto r = parse_child(g, b, {att[2], att[3]}, sig, cs);
        if (!r) continue;
        if (auto got = verified(Database::pair(m, *l, *r))) return got;
      }
      continue;
    }
  }

  // series chain for the associative mode: rank-1 markers sit on the
  // joints of the top-level path (deeper markers belong to the segments,
  // so subsets are tried largest-first and verified)
  const std::string& o =
      sig.associative.empty() ? std::string() : *sig.associative.begin();
  if (!o.empty()) {
    std::vector<int> markers;
    for (int e = 0; e < g.edge_count(); ++e)
      if (mode_of(g.edge(e).label) == o && label_rank(g.edge(e).label) == 1)
        markers.push_back(e);
    std::set<int> mnodes;
    for (int e : markers) {
      int v = g.edge(e).att[0];
      if (v != x1 && v != x2) mnodes.insert(v);
    }
    std::vector<int> mlist(mnodes.begin(), mnodes.end());
    int mn = static_cast<int>(mlist.size());
    if (mn >= 1 && mn <= 12) {
      std::vector<int> subsets;
      for (int mask = 1; mask < (1 << mn); ++mask) subsets.push_back(mask);
      std::sort(subsets.begin(), subsets.end(), [](int a, int b) {
        return __builtin_popcount(a) > __builtin_popcount(b);
      });
      for (int mask : subsets) {
        std::set<int> joints;
        for (int i = 0; i < mn; ++i)
          if ((mask >> i) & 1) joints.insert(mlist[i]);
        std::set<int> cut = joints;
        cut.insert(x1);
        cut.insert(x2);
        std::set<int> skip;
        bool sane = true;
        std::map<int, int> joint_marker;
        for (int e : markers) {
          int v = g.edge(e).att[0];
          if (joints.count(v)) {
            if (joint_marker.count(v)) { sane = false; break; }
            joint_marker[v] = e;
            skip.insert(e);
          }
        }
        if (!sane || joint_marker.size() != joints.size()) continue;
        auto pieces = pieces_cut_at(g, cut, skip);
        if (pieces.size() != joints.size() + 1) continue;
        // walk the chain from x1 to x2
        std::map<int, std::vector<int>> at_cut;  // cut node -> piece ids
        for (size_t i = 0; i < pieces.size(); ++i) {
          if (pieces[i].touches.size() != 2) { sane = false; break; }
          for (int v : pieces[i].touches)
            at_cut[v].push_back(static_cast<int>(i));
        }
        if (!sane) continue;
        std::vector<DatabasePtr> segs;
        std::vector<char> usedp(pieces.size(), 0);
        int cur = x1;
        for (size_t step = 0; step < pieces.size() && sane; ++step) {
          int pick = -1;
          for (int pi : at_cut[cur])
            if (!usedp[pi]) {
              if (pick >= 0) { sane = false; break; }
              pick = pi;
            }
          if (!sane || pick < 0) { sane = false; break; }
          usedp[pick] = 1;
          int nxt = -1;
          for (int v : pieces[pick].touches)
            if (v != cur) nxt = v;
          if (nxt < 0) { sane = false; break; }
          auto seg = parse_child(g, {&pieces[pick]}, {cur, nxt}, sig, cs);
          if (!seg) { sane = false; break; }
          segs.push_back(*seg);
          cur = nxt;
        }
        if (!sane || cur != x2 || segs.size() < 2) continue;
        DatabasePtr comb = segs.back();
        for (int i = static_cast<int>(segs.size()) - 2; i >= 0; --i)
          comb = Database::pair(o, segs[i], comb);
        if (auto got = verified(comb)) return got;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<NLMFormulaPtr> mu_inverse(const FormulaPtr& x,
                                        const Signature& sig) {
  if (!x) return std::nullopt;
  EmbedCase cs = classify(sig);
  NLMFormulaPtr t;
  try {
    t = parse_mu(x, sig, cs);
  } catch (const error&) {
    return std::nullopt;
  }
  if (!t) return std::nullopt;
  if (!same_formula(mu_impl(t, sig, cs), x)) return std::nullopt;
  return t;
}

std::optional<DatabasePtr> htree_inverse(const Hypergraph& g,
                                         const Signature& sig) {
  EmbedCase cs = classify(sig);
  try {
    return parse_htree(g, sig, cs);
  } catch (const error&) {
    return std::nullopt;
  }
}

std::optional<NLMSequent> recognize(const Hypergraph& g, const FormulaPtr& x,
                                    const Signature& sig) {
  auto t = mu_inverse(x, sig);
  if (!t) return std::nullopt;
  auto pi = htree_inverse(g, sig);
  if (!pi) return std::nullopt;
  return NLMSequent{*pi, *t};
}

bool is_hypertree(const Hypergraph& g) {
  if (g.node_count() == 0) return false;
  int roots = 0;
  for (int v = 0; v < g.node_count(); ++v) {
    // (edge, positions) incidences of v
    std::vector<std::pair<int, std::vector<int>>> inc;
    for (int e = 0; e < g.edge_count(); ++e) {
      std::vector<int> pos;
      const std::vector<int>& att = g.edge(e).att;
      for (size_t i = 0; i < att.size(); ++i)
        if (att[i] == v) pos.push_back(static_cast<int>(i) + 1);
      if (!pos.empty()) inc.push_back({e, pos});
    }
    if (inc.size() == 1) {
      if (inc[0].second != std::vector<int>{1}) return false;
      ++roots;
    } else if (inc.size() == 2) {
      const auto& a = inc[0].second;
      const auto& b = inc[1].second;
      bool afirst = a == std::vector<int>{1} && b.size() == 1 && b[0] > 1;
      bool bfirst = b == std::vector<int>{1} && a.size() == 1 && a[0] > 1;
      if (!afirst && !bfirst) return false;
    } else {
      return false;
    }
  }
  return roots == 1;
}

CollisionDemo demonstrate_two_assoc_collision() {
  CollisionDemo demo;
  auto p = NLMFormula::atom("p");
  auto q = NLMFormula::atom("q");
  auto r = NLMFormula::atom("r");
  demo.left = Database::pair(
      "O2", Database::pair("O1", Database::leaf(p), Database::leaf(q)),
      Database::leaf(r));
  demo.right = Database::pair(
      "O1", Database::leaf(p),
      Database::pair("O2", Database::leaf(q), Database::leaf(r)));

  // images built directly with the series gadget for both modes, which is
  // what a two-associative-mode translation would have to do
  FormulaPtr pg = Formula::primitive("p", 2);
  FormulaPtr qg = Formula::primitive("q", 2);
  FormulaPtr rg = Formula::primitive("r", 2);
  demo.left_image =
      replace(series_pair("O2", pg, rg), 1, series_pair("O1", pg, qg));
  demo.right_image =
      replace(series_pair("O1", pg, qg), 2, series_pair("O2", qg, rg));
  demo.images_isomorphic = isomorphic(demo.left_image, demo.right_image);

  Signature sig;
  sig.modes = {"O1", "O2"};
  sig.associative = {"O1", "O2"};
  demo.same_structural_class =
      same_database(class_representative(demo.left, sig),
                    class_representative(demo.right, sig));
  return demo;
}

}  // namespace hglc
