#include "hglc/hl.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hglc {

const char* hl_rule_name(HLRule r) {
  switch (r) {
    case HLRule::ax: return "ax";
    case HLRule::times_l: return "times_l";
    case HLRule::times_r: return "times_r";
    case HLRule::div_l: return "div_l";
    case HLRule::div_r: return "div_r";
  }
  return "?";
}

HLSequent::HLSequent(Hypergraph h, FormulaPtr a)
    : antecedent(std::move(h)), succedent(std::move(a)) {
  if (!succedent) throw error(error::code::invalid, "null succedent");
  if (label_is_hole(succedent))
    throw error(error::code::invalid, "succedent cannot be a hole");
  for (const auto& e : antecedent.edges())
    if (label_is_hole(e.label))
      throw error(error::code::invalid,
                  "hole label in a sequent antecedent");
  if (antecedent.rank() != label_rank(succedent))
    throw error(error::code::rank_mismatch,
                "sequent sides have different ranks");
  for (const auto& [name, rk] : label_alphabet(succedent)) {
    auto it = antecedent.alphabet().find(name);
    if (it != antecedent.alphabet().end() && it->second != rk)
      throw error(error::code::rank_mismatch,
                  "primitive '" + name + "' used with two ranks");
  }
}

std::string HLSequent::key() const {
  return antecedent.canonical_key() + " -> " + succedent->key();
}

// --- inverse replacement matcher ---
//
// To run (xR) and (/L) backward we must express the antecedent G as a
// simultaneous replacement into a pattern graph (the product body M, or
// the denominator D inside a context). A decomposition is determined by
//
//   * a map q from pattern nodes to G nodes (the image of the pattern),
//   * an assignment of the remaining material of G to the slots,
//   * a choice of how to un-fuse nodes where several replacement
//     boundaries collapsed onto one G node (split variants).
//
// The enumeration below is deliberately liberal: it generates every
// combination passing cheap sanity checks, and the caller verifies each
// candidate by rebuilding the conclusion and testing isomorphism. This
// keeps the completeness argument simple: any true decomposition induces
// a (q, assignment, split) triple that the enumeration visits, and no
// false positive survives the rebuild.

namespace {

// All maps q : [0..pn) -> [0..gn) extending the partial map `pin`
// (pin[i] < 0 means free), in lexicographic order of the free choices.
void enumerate_maps(int pn, int gn, const std::vector<int>& pin,
                    const std::function<void(const std::vector<int>&)>& yield) {
  std::vector<int> q(pin.begin(), pin.end());
  std::vector<int> free;
  for (int i = 0; i < pn; ++i)
    if (pin[i] < 0) free.push_back(i);
  if (!free.empty() && gn == 0) return;
  for (int i : free) q[i] = 0;
  for (;;) {
    yield(q);
    int k = static_cast<int>(free.size()) - 1;
    while (k >= 0) {
      if (++q[free[k]] < gn) break;
      q[free[k]] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

// Maximal groups of G-edges connected through non-cut nodes, plus one
// edgeless unit per isolated non-cut node. Every unit must land wholesale
// in a single slot (or the context): a non-cut node is internal to
// whatever graph gets substituted, so all its edges travel together.
struct Unit {
  std::vector<int> edges;
  std::vector<int> internals;  // non-cut nodes owned by this unit
};

std::vector<Unit> compute_units(const Hypergraph& g,
                                const std::vector<char>& is_cut,
                                int skip_edge) {
  int m = g.edge_count();
  std::vector<int> uf(m);
  for (int i = 0; i < m; ++i) uf[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<std::vector<int>> at_node(g.node_count());
  for (int e = 0; e < m; ++e) {
    if (e == skip_edge) continue;
    for (int v : g.edge(e).att) at_node[v].push_back(e);
  }
  for (int v = 0; v < g.node_count(); ++v) {
    if (is_cut[v]) continue;
    for (size_t i = 1; i < at_node[v].size(); ++i)
      uf[find(at_node[v][i])] = find(at_node[v][0]);
  }
  std::map<int, int> root_to_unit;
  std::vector<Unit> units;
  for (int e = 0; e < m; ++e) {
    if (e == skip_edge) continue;
    int r = find(e);
    auto it = root_to_unit.find(r);
    if (it == root_to_unit.end()) {
      it = root_to_unit.emplace(r, static_cast<int>(units.size())).first;
      units.push_back({});
    }
    units[it->second].edges.push_back(e);
  }
  for (int v = 0; v < g.node_count(); ++v) {
    if (is_cut[v]) continue;
    if (at_node[v].empty()) {
      units.push_back({{}, {v}});
    } else {
      units[root_to_unit.at(find(at_node[v][0]))].internals.push_back(v);
    }
  }
  return units;
}

// A fusion token: one boundary occurrence that replacement would glue.
// edge == -1 refers to ext position pos, otherwise attachment position pos
// of that edge.
struct TokenLoc {
  int edge;
  int pos;
};

// Set partitions of {0..k-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(k, 0);
  std::function<void(int, int)> rec = [&](int i, int maxb) {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= maxb + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(maxb, b));
    }
  };
  if (k == 0)
    out.push_back({});
  else
    rec(0, -1);
  return out;
}

// All graphs that fuse back onto g when, for every node, the token
// positions listed at that node are identified. Splitting a node
// distributes its tokens into nonempty groups (one new node each) and
// routes every other incidence of the node to one of the copies. The
// identity split is included, so g itself is always among the variants.
std::vector<Hypergraph> split_variants(const Hypergraph& g,
                                       const std::vector<TokenLoc>& tokens) {
  auto node_of = [&](const TokenLoc& t) {
    return t.edge < 0 ? g.ext()[t.pos] : g.edge(t.edge).att[t.pos];
  };
  std::map<int, std::vector<int>> blocks;  // node -> token indices
  for (size_t i = 0; i < tokens.size(); ++i)
    blocks[node_of(tokens[i])].push_back(static_cast<int>(i));
  std::vector<std::pair<int, std::vector<int>>> splittable;
  for (const auto& [v, toks] : blocks)
    if (toks.size() >= 2) splittable.push_back({v, toks});
  if (splittable.empty()) return {g};

  auto is_token = [&](int edge, int pos) {
    for (const auto& t : tokens)
      if (t.edge == edge && t.pos == pos) return true;
    return false;
  };

  // non-token incidences of each splittable node
  struct Incidence {
    int edge;  // -1 for ext
    int pos;
  };
  std::vector<std::vector<Incidence>> other(splittable.size());
  for (size_t si = 0; si < splittable.size(); ++si) {
    int v = splittable[si].first;
    for (int p = 0; p < g.rank(); ++p)
      if (g.ext()[p] == v && !is_token(-1, p)) other[si].push_back({-1, p});
    for (int e = 0; e < g.edge_count(); ++e)
      for (size_t p = 0; p < g.edge(e).att.size(); ++p)
        if (g.edge(e).att[p] == v && !is_token(e, static_cast<int>(p)))
          other[si].push_back({e, static_cast<int>(p)});
  }

  std::vector<Hypergraph> out;
  std::set<std::string> seen;

  // per splittable node: a partition of its tokens and a routing of its
  // other incidences to partition blocks
  std::vector<std::vector<std::vector<int>>> parts(splittable.size());
  for (size_t si = 0; si < splittable.size(); ++si)
    parts[si] = set_partitions(static_cast<int>(splittable[si].second.size()));
  std::vector<size_t> pchoice(splittable.size(), 0);

  auto emit = [&](const std::vector<std::vector<int>>& routing) {
    int n = g.node_count();
    // block b of splittable node si -> node id
    std::vector<std::vector<int>> block_node(splittable.size());
    for (size_t si = 0; si < splittable.size(); ++si) {
      const std::vector<int>& rgs = parts[si][pchoice[si]];
      int nb = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
      block_node[si].resize(nb);
      for (int b = 0; b < nb; ++b)
        block_node[si][b] = b == 0 ? splittable[si].first : n++;
    }
    std::vector<Edge> edges = g.edges();
    std::vector<int> ext = g.ext();
    auto set_loc = [&](int edge, int pos, int node) {
      if (edge < 0)
        ext[pos] = node;
      else
        edges[edge].att[pos] = node;
    };
    for (size_t si = 0; si < splittable.size(); ++si) {
      const std::vector<int>& rgs = parts[si][pchoice[si]];
      const std::vector<int>& toks = splittable[si].second;
      for (size_t t = 0; t < toks.size(); ++t)
        set_loc(tokens[toks[t]].edge, tokens[toks[t]].pos,
                block_node[si][rgs[t]]);
      for (size_t oi = 0; oi < other[si].size(); ++oi)
        set_loc(other[si][oi].edge, other[si][oi].pos,
                block_node[si][routing[si][oi]]);
    }
    // raw-layout dedupe; isomorphic duplicates are cheap to carry because
    // the callers verify candidates by reconstruction anyway
    std::string raw;
    raw.reserve(64);
    raw += std::to_string(n);
    raw += 'x';
    for (int v : ext) {
      raw += std::to_string(v);
      raw += ',';
    }
    for (const Edge& e : edges) {
      raw += ';';
      for (int v : e.att) {
        raw += std::to_string(v);
        raw += ',';
      }
    }
    if (seen.insert(std::move(raw)).second)
      out.push_back(Hypergraph(n, edges, ext));
  };

  std::function<void(size_t, std::vector<std::vector<int>>&)> route =
      [&](size_t si, std::vector<std::vector<int>>& routing) {
        if (si == splittable.size()) {
          emit(routing);
          return;
        }
        const std::vector<int>& rgs = parts[si][pchoice[si]];
        int nb =
            rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<int>& r = routing[si];
        r.assign(other[si].size(), 0);
        std::function<void(size_t)> rec = [&](size_t oi) {
          if (oi == other[si].size()) {
            route(si + 1, routing);
            return;
          }
          for (int b = 0; b < nb; ++b) {
            r[oi] = b;
            rec(oi + 1);
          }
        };
        rec(0);
      };

  std::function<void(size_t)> choose = [&](size_t si) {
    if (si == splittable.size()) {
      std::vector<std::vector<int>> routing(splittable.size());
      route(0, routing);
      return;
    }
    for (pchoice[si] = 0; pchoice[si] < parts[si].size(); ++pchoice[si])
      choose(si + 1);
  };
  choose(0);
  return out;
}

Hypergraph build_part(const Hypergraph& g, const std::vector<int>& edge_ids,
                      const std::vector<int>& internals,
                      const std::vector<int>& tokens) {
  std::map<int, int> local;
  std::vector<int> ext;
  int n = 0;
  for (int t : tokens) {
    auto it = local.find(t);
    if (it == local.end()) it = local.emplace(t, n++).first;
    ext.push_back(it->second);
  }
  for (int v : internals)
    if (!local.count(v)) local.emplace(v, n++);
  std::vector<Edge> edges;
  edges.reserve(edge_ids.size());
  for (int e : edge_ids) {
    Edge ne;
    ne.label = g.edge(e).label;
    for (int v : g.edge(e).att) ne.att.push_back(local.at(v));
    edges.push_back(std::move(ne));
  }
  return Hypergraph(n, std::move(edges), std::move(ext));
}

struct DecompCandidate {
  std::vector<Hypergraph> parts;      // one per slot
  std::optional<Hypergraph> context;  // div_l only
  int context_edge = -1;              // id of the fresh edge in *context
};

// Core enumeration shared by (xR) and (/L). `pattern` is M or D; `slots`
// the pattern edges to be re-expanded; for (/L) `hole_edge`/`g_hole_image`
// pin the hole onto a division edge of g and `context_label` is the
// numerator that labels the fresh context edge.
void enumerate_decompositions(
    const Hypergraph& g, const Hypergraph& pattern,
    const std::vector<int>& slots, int hole_edge, int g_hole_image,
    bool with_context, const FormulaPtr& context_label,
    const std::function<void(const DecompCandidate&)>& yield) {
  int pn = pattern.node_count();
  int gn = g.node_count();
  std::vector<int> pin(pn, -1);
  auto pin_node = [&](int pnode, int gnode) {
    if (pin[pnode] >= 0 && pin[pnode] != gnode) return false;
    pin[pnode] = gnode;
    return true;
  };
  if (with_context) {
    const std::vector<int>& hatt = pattern.edge(hole_edge).att;
    const std::vector<int>& gatt = g.edge(g_hole_image).att;
    if (hatt.size() != gatt.size()) return;
    for (size_t i = 0; i < hatt.size(); ++i)
      if (!pin_node(hatt[i], gatt[i])) return;
  } else {
    if (pattern.rank() != g.rank()) return;
    for (int i = 0; i < pattern.rank(); ++i)
      if (!pin_node(pattern.ext()[i], g.ext()[i])) return;
  }

  std::vector<char> g_ext_node(gn, 0);
  for (int v : g.ext()) g_ext_node[v] = 1;

  int k = static_cast<int>(slots.size());

  enumerate_maps(pn, gn, pin, [&](const std::vector<int>& q) {
    std::vector<char> is_cut(gn, 0);
    for (int i = 0; i < pn; ++i) is_cut[q[i]] = 1;

    // token sequences
    std::vector<std::vector<int>> slot_tokens(k);
    std::vector<std::set<int>> slot_allowed(k);
    for (int i = 0; i < k; ++i) {
      for (int v : pattern.edge(slots[i]).att) {
        slot_tokens[i].push_back(q[v]);
        slot_allowed[i].insert(q[v]);
      }
    }
    std::vector<int> ctx_tokens;
    std::set<int> ctx_allowed;
    if (with_context) {
      for (int v : pattern.ext()) {
        ctx_tokens.push_back(q[v]);
        ctx_allowed.insert(q[v]);
      }
    }

    auto units = compute_units(g, is_cut, with_context ? g_hole_image : -1);

    // feasible targets per unit: slot indices, or -1 for the context
    std::vector<std::vector<int>> feasible(units.size());
    for (size_t u = 0; u < units.size(); ++u) {
      std::set<int> touches;
      bool internal_ext = false;
      for (int e : units[u].edges)
        for (int v : g.edge(e).att)
          if (is_cut[v]) touches.insert(v);
      for (int v : units[u].internals)
        if (g_ext_node[v]) internal_ext = true;
      for (int i = 0; i < k; ++i) {
        if (internal_ext && with_context) continue;
        bool ok = true;
        for (int v : touches)
          if (!slot_allowed[i].count(v)) {
            ok = false;
            break;
          }
        if (ok) feasible[u].push_back(i);
      }
      if (with_context) {
        bool ok = true;
        for (int v : touches)
          if (!ctx_allowed.count(v)) {
            ok = false;
            break;
          }
        if (ok) feasible[u].push_back(-1);
      }
      if (feasible[u].empty()) return;  // this q admits no assignment
    }

    // odometer over unit assignments
    std::vector<size_t> pick(units.size(), 0);
    for (;;) {
      // build slots
      std::vector<std::vector<int>> slot_edges(k), slot_internals(k);
      std::vector<int> ctx_units;
      bool valid = true;
      for (size_t u = 0; u < units.size(); ++u) {
        int tgt = feasible[u][pick[u]];
        if (tgt < 0) {
          ctx_units.push_back(static_cast<int>(u));
        } else {
          for (int e : units[u].edges) slot_edges[tgt].push_back(e);
          for (int v : units[u].internals) {
            slot_internals[tgt].push_back(v);
            if (g_ext_node[v]) valid = false;  // internal node can't be external
          }
        }
      }
      if (valid) {
        DecompCandidate cand;
        cand.parts.reserve(k);
        for (int i = 0; i < k; ++i) {
          std::sort(slot_edges[i].begin(), slot_edges[i].end());
          cand.parts.push_back(build_part(g, slot_edges[i],
                                          slot_internals[i], slot_tokens[i]));
        }
        if (with_context) {
          // context keeps: non-cut nodes of context units, untouched
          // non-cut isolated handling is via units; cut nodes only when
          // they are boundary tokens of the context
          std::set<int> removed;
          for (int v = 0; v < gn; ++v)
            if (is_cut[v] && !ctx_allowed.count(v)) removed.insert(v);
          for (int i = 0; i < k; ++i)
            for (int v : slot_internals[i]) removed.insert(v);
          for (int v : g.ext())
            if (removed.count(v)) {
              valid = false;
              break;
            }
          if (valid) {
            std::map<int, int> local;
            int n = 0;
            for (int v = 0; v < gn; ++v)
              if (!removed.count(v)) local.emplace(v, n++);
            std::vector<int> ctx_edges;
            for (int u : ctx_units)
              for (int e : units[u].edges) ctx_edges.push_back(e);
            std::sort(ctx_edges.begin(), ctx_edges.end());
            std::vector<Edge> edges;
            for (int e : ctx_edges) {
              Edge ne;
              ne.label = g.edge(e).label;
              for (int v : g.edge(e).att) ne.att.push_back(local.at(v));
              edges.push_back(std::move(ne));
            }
            Edge fresh;
            fresh.label = context_label;
            for (int v : ctx_tokens) fresh.att.push_back(local.at(v));
            edges.push_back(std::move(fresh));
            std::vector<int> ext;
            for (int v : g.ext()) ext.push_back(local.at(v));
            cand.context = Hypergraph(n, std::move(edges), std::move(ext));
            cand.context_edge =
                cand.context->edge_count() - 1;
          }
        }
        if (valid) {
          // split variants, cartesian across parts and context
          std::vector<std::vector<Hypergraph>> variants;
          for (int i = 0; i < k; ++i) {
            std::vector<TokenLoc> toks;
            for (int p = 0; p < cand.parts[i].rank(); ++p)
              toks.push_back({-1, p});
            variants.push_back(split_variants(cand.parts[i], toks));
          }
          std::vector<Hypergraph> ctx_variants;
          if (with_context) {
            std::vector<TokenLoc> toks;
            int arity = static_cast<int>(ctx_tokens.size());
            for (int p = 0; p < arity; ++p)
              toks.push_back({cand.context_edge, p});
            ctx_variants = split_variants(*cand.context, toks);
          } else {
            ctx_variants.push_back(Hypergraph());  // dummy single choice
          }
          std::vector<size_t> vc(k, 0);
          for (;;) {
            for (size_t ci = 0; ci < ctx_variants.size(); ++ci) {
              DecompCandidate out;
              for (int i = 0; i < k; ++i)
                out.parts.push_back(variants[i][vc[i]]);
              if (with_context) {
                out.context = ctx_variants[ci];
                out.context_edge = cand.context_edge;
              }
              yield(out);
            }
            int i = k - 1;
            while (i >= 0) {
              if (++vc[i] < variants[i].size()) break;
              vc[i] = 0;
              --i;
            }
            if (i < 0) break;
          }
        }
      }
      int u = static_cast<int>(units.size()) - 1;
      while (u >= 0) {
        if (++pick[u] < feasible[u].size()) break;
        pick[u] = 0;
        --u;
      }
      if (u < 0) break;
    }
  });
}

std::vector<int> non_hole_edges(const Hypergraph& d, int hole) {
  std::vector<int> out;
  for (int e = 0; e < d.edge_count(); ++e)
    if (e != hole) out.push_back(e);
  return out;
}

}  // namespace

// --- backward expansions ---

std::vector<HLExpansion> backward_expansions(const HLSequent& s) {
  std::vector<HLExpansion> out;
  std::set<std::string> seen;
  const Hypergraph& g = s.antecedent;
  const FormulaPtr& a = s.succedent;

  auto add = [&](HLExpansion e) {
    std::string key = hl_rule_name(e.rule);
    if (e.major) key += "|" + e.major->key();
    for (const auto& p : e.premises) key += "|" + p.key();
    if (seen.insert(std::move(key)).second) out.push_back(std::move(e));
  };

  // (ax)
  if (isomorphic(g, handle(a))) add({HLRule::ax, {}, -1, nullptr});

  // (xL): expand one product edge in place
  for (int e = 0; e < g.edge_count(); ++e) {
    const FormulaPtr& lab = g.edge(e).label;
    if (lab->kind() != FormulaKind::product) continue;
    add({HLRule::times_l,
         {HLSequent(replace(g, e, lab->body()), a)},
         e,
         nullptr});
  }

  // (xR): decompose g over the edges of the product body
  if (a->kind() == FormulaKind::product) {
    const Hypergraph& m = a->body();
    std::vector<int> slots;
    for (int e = 0; e < m.edge_count(); ++e) slots.push_back(e);
    enumerate_decompositions(
        g, m, slots, -1, -1, false, nullptr,
        [&](const DecompCandidate& cand) {
          std::vector<std::pair<int, Hypergraph>> subs;
          for (size_t i = 0; i < slots.size(); ++i)
            subs.push_back({slots[i], cand.parts[i]});
          Hypergraph rebuilt = replace_many(m, subs);
          // wrong split choices change the node count; skip the expensive
          // isomorphism for those
          if (rebuilt.node_count() != g.node_count()) return;
          if (!isomorphic(rebuilt, g)) return;
          HLExpansion exp{HLRule::times_r, {}, -1, nullptr};
          for (size_t i = 0; i < slots.size(); ++i)
            exp.premises.push_back(
                HLSequent(cand.parts[i], m.edge(slots[i]).label));
          add(std::move(exp));
        });
  }

  // (/R): plug g into the denominator hole
  if (a->kind() == FormulaKind::division) {
    add({HLRule::div_r,
         {HLSequent(replace(a->body(), a->hole_edge(), g), a->numerator())},
         -1,
         nullptr});
  }

  // (/L): contract a region around each division-labeled edge
  for (int e0 = 0; e0 < g.edge_count(); ++e0) {
    const FormulaPtr& phi = g.edge(e0).label;
    if (phi->kind() != FormulaKind::division) continue;
    const Hypergraph& d = phi->body();
    int hole = phi->hole_edge();
    std::vector<int> slots = non_hole_edges(d, hole);
    enumerate_decompositions(
        g, d, slots, hole, e0, true, phi->numerator(),
        [&](const DecompCandidate& cand) {
          std::vector<std::pair<int, Hypergraph>> subs;
          subs.push_back({hole, handle(phi)});
          for (size_t i = 0; i < slots.size(); ++i)
            subs.push_back({slots[i], cand.parts[i]});
          Hypergraph region;
          Hypergraph rebuilt;
          try {
            region = replace_many(d, subs);
            rebuilt = replace(*cand.context, cand.context_edge, region);
          } catch (const error&) {
            return;  // rank clash in a degenerate candidate
          }
          if (rebuilt.node_count() != g.node_count()) return;
          if (!isomorphic(rebuilt, g)) return;
          HLExpansion exp{HLRule::div_l, {}, cand.context_edge, phi};
          exp.premises.push_back(HLSequent(*cand.context, a));
          for (size_t i = 0; i < slots.size(); ++i)
            exp.premises.push_back(
                HLSequent(cand.parts[i], d.edge(slots[i]).label));
          add(std::move(exp));
        });
  }

  return out;
}

// --- rule checking ---

namespace {

bool fail_why(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool check_rule(const HLDerivation& d, std::string* why) {
  const Hypergraph& g = d.conclusion.antecedent;
  const FormulaPtr& a = d.conclusion.succedent;
  switch (d.rule) {
    case HLRule::ax: {
      if (!d.premises.empty()) return fail_why(why, "(ax) takes no premises");
      if (!isomorphic(g, handle(a)))
        return fail_why(why, "(ax) needs the handle of the succedent");
      return true;
    }
    case HLRule::times_l: {
      if (d.premises.size() != 1)
        return fail_why(why, "(xL) takes one premise");
      if (d.edge < 0 || d.edge >= g.edge_count())
        return fail_why(why, "(xL) edge id out of range");
      const FormulaPtr& lab = g.edge(d.edge).label;
      if (lab->kind() != FormulaKind::product)
        return fail_why(why, "(xL) edge is not labeled with a product");
      if (!same_formula(d.premises[0].conclusion.succedent, a))
        return fail_why(why, "(xL) changes the succedent");
      if (!isomorphic(d.premises[0].conclusion.antecedent,
                      replace(g, d.edge, lab->body())))
        return fail_why(why, "(xL) premise antecedent mismatch");
      return true;
    }
    case HLRule::times_r: {
      if (a->kind() != FormulaKind::product)
        return fail_why(why, "(xR) needs a product succedent");
      const Hypergraph& m = a->body();
      if (static_cast<int>(d.premises.size()) != m.edge_count())
        return fail_why(why, "(xR) needs one premise per body edge");
      std::vector<std::pair<int, Hypergraph>> subs;
      for (int i = 0; i < m.edge_count(); ++i) {
        if (!same_formula(d.premises[i].conclusion.succedent,
                          m.edge(i).label))
          return fail_why(why, "(xR) premise succedent mismatch");
        subs.push_back({i, d.premises[i].conclusion.antecedent});
      }
      Hypergraph rebuilt;
      try {
        rebuilt = replace_many(m, subs);
      } catch (const error& e) {
        return fail_why(why, std::string("(xR) rebuild failed: ") + e.what());
      }
      if (!isomorphic(rebuilt, g))
        return fail_why(why, "(xR) premises do not reassemble the antecedent");
      return true;
    }
    case HLRule::div_r: {
      if (a->kind() != FormulaKind::division)
        return fail_why(why, "(/R) needs a division succedent");
      if (d.premises.size() != 1)
        return fail_why(why, "(/R) takes one premise");
      if (!same_formula(d.premises[0].conclusion.succedent, a->numerator()))
        return fail_why(why, "(/R) premise succedent mismatch");
      Hypergraph want;
      try {
        want = replace(a->body(), a->hole_edge(), g);
      } catch (const error& e) {
        return fail_why(why, std::string("(/R) rebuild failed: ") + e.what());
      }
      if (!isomorphic(d.premises[0].conclusion.antecedent, want))
        return fail_why(why, "(/R) premise antecedent mismatch");
      return true;
    }
    case HLRule::div_l: {
      if (!d.major || d.major->kind() != FormulaKind::division)
        return fail_why(why, "(/L) needs a division major formula");
      const Hypergraph& den = d.major->body();
      int hole = d.major->hole_edge();
      std::vector<int> slots = non_hole_edges(den, hole);
      if (d.premises.size() != slots.size() + 1)
        return fail_why(why, "(/L) premise count mismatch");
      const HLSequent& main = d.premises[0].conclusion;
      if (!same_formula(main.succedent, a))
        return fail_why(why, "(/L) changes the succedent");
      if (d.edge < 0 || d.edge >= main.antecedent.edge_count())
        return fail_why(why, "(/L) numerator edge id out of range");
      if (!same_formula(main.antecedent.edge(d.edge).label,
                        d.major->numerator()))
        return fail_why(why, "(/L) marked edge is not the numerator");
      std::vector<std::pair<int, Hypergraph>> subs;
      subs.push_back({hole, handle(d.major)});
      for (size_t i = 0; i < slots.size(); ++i) {
        if (!same_formula(d.premises[i + 1].conclusion.succedent,
                          den.edge(slots[i]).label))
          return fail_why(why, "(/L) denominator premise succedent mismatch");
        subs.push_back({slots[i], d.premises[i + 1].conclusion.antecedent});
      }
      Hypergraph rebuilt;
      try {
        Hypergraph region = replace_many(den, subs);
        rebuilt = replace(main.antecedent, d.edge, region);
      } catch (const error& e) {
        return fail_why(why, std::string("(/L) rebuild failed: ") + e.what());
      }
      if (!isomorphic(rebuilt, g))
        return fail_why(why, "(/L) premises do not reassemble the antecedent");
      return true;
    }
  }
  return fail_why(why, "unknown rule");
}

bool check_derivation(const HLDerivation& d, std::string* why) {
  if (!check_rule(d, why)) return false;
  for (const auto& p : d.premises)
    if (!check_derivation(p, why)) return false;
  return true;
}

// --- prover ---

HLProveResult HLProver::search(const HLSequent& s, int budget) {
  std::string key = s.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      const Entry& e = it->second;
      if (e.verdict == Verdict::derivable)
        return {Verdict::derivable, e.derivation};
      if (e.verdict == Verdict::underivable)
        return {Verdict::underivable, {}};
      if (e.budget >= budget) return {Verdict::exhausted, {}};
    }
  }

  if (budget <= 0) {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.insert_or_assign(key, Entry{Verdict::exhausted, std::nullopt, budget});
    return {Verdict::exhausted, {}};
  }

  std::vector<HLExpansion> exps = backward_expansions(s);
  bool any_exhausted = false;
  for (auto& exp : exps) {
    std::vector<HLDerivation> prem_ders;
    prem_ders.reserve(exp.premises.size());
    bool all_ok = true;
    for (const auto& ps : exp.premises) {
      HLProveResult r = search(ps, budget - 1);
      if (r.verdict == Verdict::derivable) {
        prem_ders.push_back(std::move(*r.derivation));
      } else {
        if (r.verdict == Verdict::exhausted) any_exhausted = true;
        all_ok = false;
        break;
      }
    }
    if (!all_ok) continue;
    int edge = exp.edge;
    if (exp.rule == HLRule::div_l) {
      // the memo may answer with an isomorphic representative of premise 0,
      // where the numerator edge has a different id; relocate it
      const Hypergraph& want = exp.premises[0].antecedent;
      const Hypergraph& got = prem_ders[0].conclusion.antecedent;
      if (auto wit = find_isomorphism(want, got))
        edge = wit->edge_map[exp.edge];
    }
    HLDerivation node{s, exp.rule, std::move(prem_ders), edge, exp.major};
    {
      std::lock_guard<std::mutex> lock(mu_);
      memo_.insert_or_assign(key, Entry{Verdict::derivable, node, budget});
    }
    return {Verdict::derivable, std::move(node)};
  }

  Verdict v = any_exhausted ? Verdict::exhausted : Verdict::underivable;
  {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.insert_or_assign(key, Entry{v, std::nullopt, budget});
  }
  return {v, {}};
}

HLProveResult HLProver::prove(const HLSequent& s, int budget) {
  if (budget < 0) budget = 0;
  return search(s, budget);
}

std::pair<Verdict, Verdict> HLProver::residuation_check(const Hypergraph& f,
                                                        const FormulaPtr& n,
                                                        const Hypergraph& d,
                                                        int budget) {
  FormulaPtr dv = Formula::division(n, d);
  HLSequent left(f, dv);
  HLSequent right(replace(d, dv->hole_edge(), f), n);
  return {prove(left, budget).verdict, prove(right, budget).verdict};
}

HLProver::Lemma1 HLProver::lemma1_check(const Hypergraph& h,
                                        const FormulaPtr& p, int budget) {
  if (!p || p->kind() != FormulaKind::primitive) return Lemma1::inapplicable;
  if (h.rank() != label_rank(p)) return Lemma1::inapplicable;
  for (const auto& e : h.edges()) {
    if (label_is_hole(e.label)) return Lemma1::inapplicable;
    if (!is_skeleton_free(e.label)) return Lemma1::inapplicable;
    for (const auto& b : subformulas(e.label)) {
      auto hs = head(b);
      if (hs.size() == 1 && same_formula(hs[0], p) && !same_formula(b, p))
        return Lemma1::inapplicable;
    }
  }
  HLProveResult r = prove(HLSequent(h, p), budget);
  if (r.verdict == Verdict::exhausted) return Lemma1::exhausted;
  if (r.verdict == Verdict::underivable) return Lemma1::holds;  // vacuous
  return isomorphic(h, handle(p)) ? Lemma1::holds : Lemma1::fails;
}

// --- classical Lambek calculus ---

LCFormulaPtr LCFormula::atom(const std::string& name) {
  auto f = std::shared_ptr<LCFormula>(new LCFormula());
  f->kind_ = Kind::atom;
  f->name_ = name;
  return f;
}

LCFormulaPtr LCFormula::prod(LCFormulaPtr a, LCFormulaPtr b) {
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<LCFormula>(new LCFormula());
  f->kind_ = Kind::prod;
  f->left_ = std::move(a);
  f->right_ = std::move(b);
  return f;
}

LCFormulaPtr LCFormula::over(LCFormulaPtr a, LCFormulaPtr b) {
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<LCFormula>(new LCFormula());
  f->kind_ = Kind::over;
  f->left_ = std::move(a);
  f->right_ = std::move(b);
  return f;
}

LCFormulaPtr LCFormula::under(LCFormulaPtr b, LCFormulaPtr a) {
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<LCFormula>(new LCFormula());
  f->kind_ = Kind::under;
  f->left_ = std::move(b);
  f->right_ = std::move(a);
  return f;
}

FormulaPtr tr_classic(const LCFormulaPtr& f) {
  if (!f) throw error(error::code::invalid, "null formula");
  switch (f->kind()) {
    case LCFormula::Kind::atom:
      return Formula::primitive(f->name(), 2);
    case LCFormula::Kind::prod:
      return Formula::product(
          string_graph({tr_classic(f->left()), tr_classic(f->right())}));
    case LCFormula::Kind::over:
      // A / B becomes tr(A) over a denominator [hole][tr B]
      return Formula::division(
          tr_classic(f->left()),
          string_graph({Formula::hole(2), tr_classic(f->right())}));
    case LCFormula::Kind::under:
      // B \ A becomes tr(A) over a denominator [tr B][hole]
      return Formula::division(
          tr_classic(f->right()),
          string_graph({tr_classic(f->left()), Formula::hole(2)}));
  }
  throw error(error::code::invalid, "unknown formula kind");
}

HLSequent tr_classic_sequent(const std::vector<LCFormulaPtr>& antecedent,
                             const LCFormulaPtr& succedent) {
  std::vector<FormulaPtr> word;
  word.reserve(antecedent.size());
  for (const auto& f : antecedent) word.push_back(tr_classic(f));
  return HLSequent(string_graph(word), tr_classic(succedent));
}

}  // namespace hglc
