#include "hglc/hypergraph.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "hglc/text.hpp"

namespace hglc {

namespace {

void merge_alphabet(Alphabet& into, const Alphabet& from) {
  for (const auto& [name, rank] : from) {
    auto [it, fresh] = into.emplace(name, rank);
    if (!fresh && it->second != rank)
      throw error(error::code::rank_mismatch,
                  "label '" + name + "' used with conflicting ranks " +
                      std::to_string(it->second) + " and " +
                      std::to_string(rank));
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Dense re-ranking: assigns 0..k-1 by sorted signature order, so the new
// coloring refines (oldcolor, signature) lexicographically.
template <typename Sig>
int rerank(const std::vector<Sig>& sigs, std::vector<int>& out) {
  int n = static_cast<int>(sigs.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return sigs[a] < sigs[b]; });
  out.assign(n, 0);
  int color = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && sigs[idx[i]] != sigs[idx[i - 1]]) ++color;
    out[idx[i]] = color;
  }
  return color + 1;
}

struct Canonicalizer {
  const Hypergraph& g;
  int n, m;
  std::vector<int> elab;                            // edge -> label color
  std::vector<std::vector<std::pair<int, int>>> inc;  // node -> (edge,pos)
  std::string best;
  bool have_best = false;

  explicit Canonicalizer(const Hypergraph& gg)
      : g(gg), n(gg.node_count()), m(gg.edge_count()), inc(n) {
    std::vector<std::string> keys;
    keys.reserve(m);
    for (const auto& e : g.edges()) keys.push_back(label_key(e.label));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    elab.resize(m);
    for (int e = 0; e < m; ++e) {
      const std::string& k = label_key(g.edges()[e].label);
      elab[e] = static_cast<int>(
          std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
      for (int i = 0; i < static_cast<int>(g.edges()[e].att.size()); ++i)
        inc[g.edges()[e].att[i]].push_back({e, i});
    }
  }

  std::vector<int> initial_colors() const {
    // External nodes are pinned by their position profile in ext.
    std::vector<std::vector<int>> sig(n);
    for (int i = 0; i < g.rank(); ++i) sig[g.ext()[i]].push_back(i);
    std::vector<int> col;
    rerank(sig, col);
    return col;
  }

  int refine(std::vector<int>& ncol) const {
    int colors = 1 + (ncol.empty() ? -1 : *std::max_element(ncol.begin(),
                                                            ncol.end()));
    while (true) {
      std::vector<std::vector<int>> esig(m);
      for (int e = 0; e < m; ++e) {
        esig[e].push_back(elab[e]);
        for (int v : g.edges()[e].att) esig[e].push_back(ncol[v]);
      }
      std::vector<int> ecol;
      rerank(esig, ecol);

      std::vector<std::vector<int>> nsig(n);
      for (int v = 0; v < n; ++v) {
        nsig[v].push_back(ncol[v]);
        std::vector<std::pair<int, int>> loc;
        for (auto [e, pos] : inc[v]) loc.push_back({ecol[e], pos});
        std::sort(loc.begin(), loc.end());
        for (auto [c, pos] : loc) {
          nsig[v].push_back(c);
          nsig[v].push_back(pos);
        }
      }
      std::vector<int> next;
      int cnt = rerank(nsig, next);
      ncol = std::move(next);
      if (cnt == colors) return cnt;  // partition stable
      colors = cnt;
    }
  }

  std::string certificate(const std::vector<int>& order) const {
    // order[v] = canonical index of node v (colors are discrete here)
    std::ostringstream out;
    out << "n=" << n << ";x=";
    for (size_t i = 0; i < g.ext().size(); ++i)
      out << (i ? "," : "") << order[g.ext()[i]];
    std::vector<std::string> recs;
    recs.reserve(m);
    for (const auto& e : g.edges()) {
      const std::string& k = label_key(e.label);
      std::ostringstream r;
      r << k.size() << ":" << k << "@";
      for (size_t i = 0; i < e.att.size(); ++i)
        r << (i ? "," : "") << order[e.att[i]];
      recs.push_back(r.str());
    }
    std::sort(recs.begin(), recs.end());
    out << ";e=";
    for (const auto& r : recs) out << r << ";";
    return out.str();
  }

  void search(std::vector<int> ncol) {
    int colors = refine(ncol);
    if (colors == n) {
      std::string cert = certificate(ncol);
      if (!have_best || cert < best) {
        best = std::move(cert);
        have_best = true;
      }
      return;
    }
    // Individualize each member of the smallest non-singleton color class.
    std::vector<int> count(colors, 0);
    for (int c : ncol) ++count[c];
    int target = 0;
    while (count[target] < 2) ++target;
    for (int v = 0; v < n; ++v) {
      if (ncol[v] != target) continue;
      std::vector<int> branch = ncol;
      branch[v] = colors;  // fresh color
      search(std::move(branch));
    }
  }

  std::string run() {
    if (n == 0) {
      std::vector<int> none;
      return certificate(none);
    }
    search(initial_colors());
    return best;
  }
};

}  // namespace

Hypergraph::Hypergraph(int node_count, std::vector<Edge> edges,
                       std::vector<int> ext)
    : node_count_(node_count), edges_(std::move(edges)), ext_(std::move(ext)) {
  if (node_count_ < 0)
    throw error(error::code::invalid, "negative node count");
  auto check_node = [&](int v, const char* where) {
    if (v < 0 || v >= node_count_)
      throw error(error::code::not_found,
                  std::string("node id out of range in ") + where);
  };
  for (const auto& e : edges_) {
    if (!e.label) throw error(error::code::invalid, "edge without label");
    if (static_cast<int>(e.att.size()) != label_rank(e.label))
      throw error(error::code::rank_mismatch,
                  "attachment arity " + std::to_string(e.att.size()) +
                      " does not match label rank " +
                      std::to_string(label_rank(e.label)));
    for (int v : e.att) check_node(v, "attachment");
    merge_alphabet(alphabet_, label_alphabet(e.label));
  }
  for (int v : ext_) check_node(v, "ext");
}

const Edge& Hypergraph::edge(int id) const {
  if (id < 0 || id >= edge_count())
    throw error(error::code::not_found,
                "no edge with id " + std::to_string(id));
  return edges_[id];
}

const std::string& Hypergraph::canonical_key() const {
  if (!key_done_) {
    Canonicalizer c(*this);
    key_ = c.run();
    key_done_ = true;
  }
  return key_;
}

bool Hypergraph::operator==(const Hypergraph& other) const {
  return isomorphic(*this, other);
}

Hypergraph handle(const FormulaPtr& label) {
  int r = label_rank(label);
  std::vector<int> seq(r);
  for (int i = 0; i < r; ++i) seq[i] = i;
  return Hypergraph(r, {{label, seq}}, seq);
}

Hypergraph string_graph(const std::vector<FormulaPtr>& word) {
  std::vector<Edge> edges;
  for (size_t i = 0; i < word.size(); ++i) {
    if (label_rank(word[i]) != 2)
      throw error(error::code::rank_mismatch,
                  "string graphs take rank-2 labels");
    edges.push_back({word[i], {static_cast<int>(i), static_cast<int>(i) + 1}});
  }
  int n = static_cast<int>(word.size()) + 1;
  return Hypergraph(n, std::move(edges), {0, n - 1});
}

Hypergraph replace_many(const Hypergraph& g,
                        const std::vector<std::pair<int, Hypergraph>>& subs) {
  std::vector<char> replaced(g.edge_count(), 0);
  for (const auto& [id, h] : subs) {
    if (id < 0 || id >= g.edge_count())
      throw error(error::code::not_found,
                  "no edge with id " + std::to_string(id));
    if (replaced[id])
      throw error(error::code::invalid,
                  "edge " + std::to_string(id) + " replaced twice");
    replaced[id] = 1;
    if (g.edge_rank(id) != h.rank())
      throw error(error::code::rank_mismatch,
                  "replacing a rank-" + std::to_string(g.edge_rank(id)) +
                      " edge with a rank-" + std::to_string(h.rank()) +
                      " hypergraph");
  }

  int total = g.node_count();
  std::vector<int> offset(subs.size());
  for (size_t k = 0; k < subs.size(); ++k) {
    offset[k] = total;
    total += subs[k].second.node_count();
  }
  UnionFind uf(total);
  for (size_t k = 0; k < subs.size(); ++k) {
    const auto& [id, h] = subs[k];
    for (int i = 0; i < h.rank(); ++i)
      uf.unite(g.edges()[id].att[i], offset[k] + h.ext()[i]);
  }

  std::vector<int> renum(total, -1);
  int next = 0;
  auto node_of = [&](int raw) {
    int root = uf.find(raw);
    if (renum[root] < 0) renum[root] = next++;
    return renum[root];
  };
  // Fix numbering by first occurrence: g's nodes, then each substitution's.
  for (int v = 0; v < total; ++v) node_of(v);

  std::vector<Edge> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (replaced[e]) continue;
    Edge copy = g.edges()[e];
    for (int& v : copy.att) v = node_of(v);
    edges.push_back(std::move(copy));
  }
  for (size_t k = 0; k < subs.size(); ++k) {
    for (const auto& he : subs[k].second.edges()) {
      Edge copy = he;
      for (int& v : copy.att) v = node_of(offset[k] + v);
      edges.push_back(std::move(copy));
    }
  }
  std::vector<int> ext;
  for (int v : g.ext()) ext.push_back(node_of(v));
  return Hypergraph(next, std::move(edges), std::move(ext));
}

Hypergraph replace(const Hypergraph& g, int edge_id, const Hypergraph& h) {
  return replace_many(g, {{edge_id, h}});
}

Hypergraph relabel(const Hypergraph& g, const std::map<int, FormulaPtr>& f) {
  std::vector<Edge> edges = g.edges();
  for (const auto& [id, label] : f) {
    if (id < 0 || id >= g.edge_count())
      throw error(error::code::not_found,
                  "no edge with id " + std::to_string(id));
    if (label_rank(label) != g.edge_rank(id))
      throw error(error::code::rank_mismatch,
                  "relabel changes the rank of edge " + std::to_string(id));
    edges[id].label = label;
  }
  return Hypergraph(g.node_count(), std::move(edges), g.ext());
}

Hypergraph remove_edge(const Hypergraph& g, int edge_id) {
  if (edge_id < 0 || edge_id >= g.edge_count())
    throw error(error::code::not_found,
                "no edge with id " + std::to_string(edge_id));
  std::vector<Edge> edges;
  for (int e = 0; e < g.edge_count(); ++e)
    if (e != edge_id) edges.push_back(g.edges()[e]);
  return Hypergraph(g.node_count(), std::move(edges), g.ext());
}

bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count() ||
      a.rank() != b.rank())
    return false;
  return a.canonical_key() == b.canonical_key();
}

namespace {

std::string node_invariant(const Hypergraph& g, int v) {
  std::ostringstream s;
  for (size_t i = 0; i < g.ext().size(); ++i)
    if (g.ext()[i] == v) s << i << ",";
  s << "|";
  std::vector<std::string> loc;
  for (const auto& e : g.edges())
    for (size_t i = 0; i < e.att.size(); ++i)
      if (e.att[i] == v)
        loc.push_back(label_key(e.label) + "#" + std::to_string(i));
  std::sort(loc.begin(), loc.end());
  for (const auto& l : loc) s << l << ";";
  return s.str();
}

std::string edge_code(const Edge& e, const std::vector<int>& node_map) {
  std::ostringstream s;
  const std::string& k = label_key(e.label);
  s << k.size() << ":" << k << "@";
  for (int v : e.att) s << node_map[v] << ",";
  return s.str();
}

}  // namespace

std::optional<IsoWitness> find_isomorphism(const Hypergraph& a,
                                           const Hypergraph& b) {
  int n = a.node_count();
  if (n != b.node_count() || a.edge_count() != b.edge_count() ||
      a.rank() != b.rank())
    return std::nullopt;

  std::vector<std::string> inv_a(n), inv_b(n);
  for (int v = 0; v < n; ++v) {
    inv_a[v] = node_invariant(a, v);
    inv_b[v] = node_invariant(b, v);
  }
  {
    std::vector<std::string> sa = inv_a, sb = inv_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  std::vector<int> node_map(n, -1);
  std::vector<char> used(n, 0);
  // External nodes are forced pointwise.
  for (int i = 0; i < a.rank(); ++i) {
    int va = a.ext()[i], vb = b.ext()[i];
    if (node_map[va] >= 0) {
      if (node_map[va] != vb) return std::nullopt;
      continue;
    }
    if (used[vb] || inv_a[va] != inv_b[vb]) return std::nullopt;
    node_map[va] = vb;
    used[vb] = 1;
  }
  std::vector<int> free_nodes;
  for (int v = 0; v < n; ++v)
    if (node_map[v] < 0) free_nodes.push_back(v);

  std::optional<IsoWitness> result;
  auto edges_match = [&]() -> bool {
    std::map<std::string, std::vector<int>> pool;
    for (int e = 0; e < b.edge_count(); ++e) {
      std::vector<int> ident(n);
      for (int v = 0; v < n; ++v) ident[v] = v;
      pool[edge_code(b.edges()[e], ident)].push_back(e);
    }
    std::vector<int> edge_map(a.edge_count(), -1);
    for (int e = 0; e < a.edge_count(); ++e) {
      auto it = pool.find(edge_code(a.edges()[e], node_map));
      if (it == pool.end() || it->second.empty()) return false;
      edge_map[e] = it->second.back();
      it->second.pop_back();
    }
    result = IsoWitness{node_map, edge_map};
    return true;
  };

  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    if (i == free_nodes.size()) return edges_match();
    int va = free_nodes[i];
    for (int vb = 0; vb < n; ++vb) {
      if (used[vb] || inv_a[va] != inv_b[vb]) continue;
      node_map[va] = vb;
      used[vb] = 1;
      if (go(i + 1)) return true;
      node_map[va] = -1;
      used[vb] = 0;
    }
    return false;
  };
  go(0);
  return result;
}

std::string to_json(const Hypergraph& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (int v = 0; v < g.node_count(); ++v) j["nodes"].push_back(v);
  j["edges"] = nlohmann::json::array();
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    j["edges"].push_back({{"id", e},
                          {"label", label_text(ed.label)},
                          {"rank", static_cast<int>(ed.att.size())},
                          {"att", ed.att}});
  }
  j["ext"] = g.ext();
  return j.dump();
}

Hypergraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse, std::string("bad graph JSON: ") + e.what());
  }
  try {
    std::map<long long, int> ids;
    for (const auto& v : j.at("nodes")) {
      long long raw = v.get<long long>();
      if (!ids.emplace(raw, static_cast<int>(ids.size())).second)
        throw error(error::code::parse, "duplicate node id in graph JSON");
    }
    auto node = [&](long long raw) {
      auto it = ids.find(raw);
      if (it == ids.end())
        throw error(error::code::parse,
                    "unknown node id " + std::to_string(raw));
      return it->second;
    };
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      FormulaPtr label = parse_formula(je.at("label").get<std::string>());
      if (je.contains("rank") &&
          je.at("rank").get<int>() != label_rank(label))
        throw error(error::code::parse,
                    "edge rank field disagrees with label rank");
      std::vector<int> att;
      for (const auto& v : je.at("att")) att.push_back(node(v.get<long long>()));
      edges.push_back({label, std::move(att)});
    }
    std::vector<int> ext;
    for (const auto& v : j.at("ext")) ext.push_back(node(v.get<long long>()));
    return Hypergraph(static_cast<int>(ids.size()), std::move(edges),
                      std::move(ext));
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse, std::string("bad graph JSON: ") + e.what());
  }
}

std::string to_dot(const Hypergraph& g, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  for (int v = 0; v < g.node_count(); ++v) {
    std::string ann;
    for (size_t i = 0; i < g.ext().size(); ++i)
      if (g.ext()[i] == v) ann += (ann.empty() ? "(" : ",") + std::to_string(i + 1);
    if (!ann.empty()) ann += ")";
    out << "  n" << v << " [shape=circle,label=\"" << v
        << (ann.empty() ? "" : "\\n" + ann) << "\"];\n";
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    std::string lab = label_text(ed.label);
    std::string esc;
    for (char c : lab) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    if (ed.att.size() == 2) {
      out << "  n" << ed.att[0] << " -> n" << ed.att[1] << " [label=\"" << esc
          << "\",penwidth=2];\n";
    } else {
      out << "  e" << e << " [shape=box,label=\"" << esc << "\"];\n";
      for (size_t i = 0; i < ed.att.size(); ++i)
        out << "  e" << e << " -> n" << ed.att[i] << " [label=\"" << (i + 1)
            << "\",dir=none];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace hglc
