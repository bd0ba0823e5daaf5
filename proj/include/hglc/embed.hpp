#pragma once

// The translation of NL<> into the hypergraph calculus. Formulas map to
// formulas via `mu`, structured databases map to hypergraphs via `htree`;
// a sequent Pi -> T becomes htree(Pi) -> mu(T). Commutativity and
// associativity of modes are absorbed into the graph structure, so the
// translation needs no structural rules on the HL side.
//
// Gadgets (edge 0 is always the structural edge, edges 1,2 the slots):
//
//   tree_branch        R[i]   3 nodes; mode edge (top,l,r); slots at l,r;
//                             ext = top. Plain binary modes.
//   shared_branch      K[c]   2 nodes; mode edge (top,hub); both slots at
//                             hub; ext = top. Commutative modes.
//   unary_branch       U[j]   like K but a single slot. Modalities.
//   hub_branch         KO     like K but ext = hub, so nested hubs fuse.
//                             The associative-commutative mode.
//   wide_branch        Rb[i]  6 nodes; mode edge (x1,x2,a1,a2,b1,b2);
//                             rank-2 slots at (a1,a2),(b1,b2); ext x1,x2.
//   parallel_branch    Kb[c]  4 nodes; both rank-2 slots parallel between
//                             the same pair; ext x1,x2.
//   unary_wide_branch  Ub[j]  like Kb with one slot.
//   series_pair        RbO    3 nodes x1,m,x2; slots (x1,m),(m,x2); a
//                             rank-1 marker on m; ext x1,x2. Series
//                             composition for the associative
//                             non-commutative mode.
//
// Slot labels may be formulas or holes (for division denominators).

#include <optional>
#include <string>

#include "hglc/hl.hpp"
#include "hglc/nlm.hpp"

namespace hglc {

// Which translation a signature gets:
//   plain        no commutative, no associative modes, no modalities
//   commutative  no associative modes
//   assoc_comm   one associative mode, and it is commutative
//   assoc_only   one associative mode, not commutative (rank-2 translation)
enum class EmbedCase { plain, commutative, assoc_comm, assoc_only };

// Throws error::signature when |associative| > 1: two associative modes
// are not embeddable (see demonstrate_two_assoc_collision).
EmbedCase classify(const Signature& sig);

const char* embed_case_name(EmbedCase c);

// Modes and modalities live in the primitive alphabet under namespaced
// names ("mode:i", "mod:j") so they cannot collide with atoms.
FormulaPtr mode_label(const std::string& mode, const Signature& sig);
FormulaPtr modality_label(const std::string& modality, const Signature& sig);
FormulaPtr atom_label(const std::string& atom, const Signature& sig);

// --- gadget builders (labels may be holes) ---

Hypergraph tree_branch(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b);
Hypergraph shared_branch(const std::string& mode, const FormulaPtr& a,
                         const FormulaPtr& b);
Hypergraph unary_branch(const std::string& modality, const FormulaPtr& a);
Hypergraph hub_branch(const std::string& mode, const FormulaPtr& a,
                      const FormulaPtr& b);
Hypergraph wide_branch(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b);
Hypergraph parallel_branch(const std::string& mode, const FormulaPtr& a,
                           const FormulaPtr& b);
Hypergraph unary_wide_branch(const std::string& modality, const FormulaPtr& a);
Hypergraph series_pair(const std::string& mode, const FormulaPtr& a,
                       const FormulaPtr& b);

// --- translation ---

FormulaPtr mu(const NLMFormulaPtr& f, const Signature& sig);
Hypergraph htree(const DatabasePtr& db, const Signature& sig);
HLSequent translate_sequent(const NLMSequent& s, const Signature& sig);

// --- inverse recognition ---

// If x == mu(T) for some formula T over sig, return such a T. mu is not
// injective on commutative divisions (B \c A and A /c B share an image);
// the /-form is returned for those.
std::optional<NLMFormulaPtr> mu_inverse(const FormulaPtr& x,
                                        const Signature& sig);

// If g == htree(Pi) for some database Pi, return such a Pi (unique up to
// structural class).
std::optional<DatabasePtr> htree_inverse(const Hypergraph& g,
                                         const Signature& sig);

// Both of the above on a sequent; verified by reconstruction before
// returning, so a non-empty result round-trips exactly.
std::optional<NLMSequent> recognize(const Hypergraph& g, const FormulaPtr& x,
                                    const Signature& sig);

// Strict hypertree condition: every node is the first attachment node of
// exactly one edge and an i>1 attachment node of exactly one other edge,
// except a single root with no i>1 attachment. htree images satisfy this
// whenever the database uses no commutative or associative pairs (a
// commutative hub legally carries both slot edges, which generalizes the
// hypertree shape).
bool is_hypertree(const Hypergraph& g);

// Why |associative| <= 1 is required: with two associative modes O1, O2
// the series translation maps ((p,q)^O1,r)^O2 and (p,(q,r)^O2)^O1 to
// isomorphic hypergraphs although they are not structurally equal in
// NL<>. Built with the signature check bypassed.
struct CollisionDemo {
  DatabasePtr left, right;
  Hypergraph left_image, right_image;
  bool images_isomorphic;
  bool same_structural_class;
};
CollisionDemo demonstrate_two_assoc_collision();

}  // namespace hglc
