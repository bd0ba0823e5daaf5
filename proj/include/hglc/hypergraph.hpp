#pragma once

// Ranked hypergraphs with hyperedge replacement.
//
// A hypergraph is a finite set of nodes plus a finite set of hyperedges;
// every hyperedge carries a label and an ordered attachment sequence of
// nodes whose length equals the label's rank. A distinguished sequence of
// external nodes gives the graph itself a rank. Equality of hypergraphs is
// isomorphism; `canonical_key` produces a certificate string that two
// graphs share exactly when they are isomorphic.
//
// Edge labels are HL formulas (see formula.hpp). Primitive formulas double
// as plain ranked alphabet symbols, so this module is usable on its own
// with `Formula::primitive` labels.
//
// Values are immutable after construction. The canonical key is computed
// lazily and cached; compute it once (any query does) before sharing a
// graph across threads.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hglc {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Implemented in formula.cpp. `label_key` is a structural identity string:
// two labels have equal keys iff they are the same formula (graph bodies
// compared up to isomorphism).
const std::string& label_key(const FormulaPtr& f);
int label_rank(const FormulaPtr& f);
bool label_is_hole(const FormulaPtr& f);
std::string label_text(const FormulaPtr& f);

// Primitive name -> rank, for the "one rank per name" alphabet invariant.
using Alphabet = std::map<std::string, int>;
const Alphabet& label_alphabet(const FormulaPtr& f);

class error : public std::runtime_error {
public:
  enum class code {
    invalid,        // malformed value or argument
    rank_mismatch,  // replacement/relabel rank disagreement
    not_found,      // missing edge or node id
    parse,          // text/JSON syntax error
    signature,      // bad or unsupported signature
  };
  error(code c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  code kind() const { return code_; }

private:
  code code_;
};

struct Edge {
  FormulaPtr label;
  std::vector<int> att;
};

class Hypergraph {
public:
  // Empty hypergraph: no nodes, no edges, empty ext (rank 0).
  Hypergraph() = default;

  // Nodes are 0..node_count-1; edge ids are indices into `edges`.
  // Validates attachment arity against label ranks, node id bounds, and
  // the alphabet invariant across all labels.
  Hypergraph(int node_count, std::vector<Edge> edges, std::vector<int> ext);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const;
  const std::vector<int>& ext() const { return ext_; }
  int rank() const { return static_cast<int>(ext_.size()); }
  int edge_rank(int id) const { return static_cast<int>(edge(id).att.size()); }
  const Alphabet& alphabet() const { return alphabet_; }

  // Certificate of the isomorphism class. Lazily computed, cached.
  const std::string& canonical_key() const;

  bool operator==(const Hypergraph& other) const;  // isomorphism

private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> ext_;
  Alphabet alphabet_;
  mutable std::string key_;
  mutable bool key_done_ = false;
};

// --- constructions ---

// Handle a*: rank(a) fresh nodes, one a-labeled edge attached to all of
// them in order, ext equal to that same sequence.
Hypergraph handle(const FormulaPtr& label);

// String graph SG(w): a path of |w| rank-2 edges; ext = first,last node.
Hypergraph string_graph(const std::vector<FormulaPtr>& word);

// --- operations ---

// G[e/H]: fuse H into G in place of edge e, identifying att_G(e)(i) with
// ext_H(i). Requires rank(e) == rank(H).
Hypergraph replace(const Hypergraph& g, int edge_id, const Hypergraph& h);

// Simultaneous replacement of distinct edges; equals any sequential order.
Hypergraph replace_many(const Hypergraph& g,
                        const std::vector<std::pair<int, Hypergraph>>& subs);

Hypergraph relabel(const Hypergraph& g, const std::map<int, FormulaPtr>& f);
Hypergraph remove_edge(const Hypergraph& g, int edge_id);

// --- isomorphism ---

bool isomorphic(const Hypergraph& a, const Hypergraph& b);

struct IsoWitness {
  std::vector<int> node_map;  // a-node -> b-node
  std::vector<int> edge_map;  // a-edge -> b-edge
};

// Explicit backtracking matcher, independent of canonical keys.
std::optional<IsoWitness> find_isomorphism(const Hypergraph& a,
                                           const Hypergraph& b);

// --- serialization ---

// {"nodes":[ids],"edges":[{"id","label","rank","att":[...]}],"ext":[...]}
std::string to_json(const Hypergraph& g);
Hypergraph graph_from_json(const std::string& text);

// Nodes as circles, rank-2 edges as thick arrows, other hyperedges as
// boxes with numbered tentacles; external nodes annotated "(i)".
std::string to_dot(const Hypergraph& g, const std::string& name = "G");

}  // namespace hglc
