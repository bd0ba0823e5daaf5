#pragma once

// Text syntax and JSON for formulas, graphs, sequents, databases and
// derivations.
//
// HL formulas:   p:1 (rank optional, default 1), $:2 (hole),
//                x(<graph>), div(<formula>, <graph>)
// graphs:        handle(f), sg(f1,...,fn), gadget constructors
//                R[i](f,g)  K[c](f,g)  U[j](f)  KO(f,g)
//                Rb[i](f,g) Kb[c](f,g) Ub[j](f) RbO(f,g)
//                (slots take a formula or $ for the hole), or inline
//                JSON {...} in the schema of hypergraph.hpp
// HL sequents:   <graph> -> <formula>
// NL<> formulas: atoms; A *i B, B \i A, A /i B, <>j A, []j A
// databases:     (Pi , Pi)^i   < Pi >^j   formula
// NL<> sequents: <database> -> <formula>

#include <string>

#include "hglc/hl.hpp"
#include "hglc/nlm.hpp"

namespace hglc {

FormulaPtr parse_formula(const std::string& text);
std::string format_formula(const FormulaPtr& f);

Hypergraph parse_graph(const std::string& text);

HLSequent parse_hl_sequent(const std::string& text);
// {"antecedent": <graph JSON>, "succedent": "<formula>"}
std::string hl_sequent_to_json(const HLSequent& s);
HLSequent hl_sequent_from_json(const std::string& text);

NLMFormulaPtr parse_nlm_formula(const std::string& text, const Signature& sig);
DatabasePtr parse_database(const std::string& text, const Signature& sig);
NLMSequent parse_nlm_sequent(const std::string& text, const Signature& sig);

std::string format_nlm_formula(const NLMFormulaPtr& f);
std::string format_database(const DatabasePtr& db);
std::string format_nlm_sequent(const NLMSequent& s);
std::string format_hl_sequent(const HLSequent& s);

// Derivations as JSON trees and as indented proof text.
std::string hl_derivation_to_json(const HLDerivation& d);
HLDerivation hl_derivation_from_json(const std::string& text);
std::string hl_derivation_to_text(const HLDerivation& d);

std::string nlm_derivation_to_json(const NLMDerivation& d);
NLMDerivation nlm_derivation_from_json(const std::string& text,
                                       const Signature& sig);
std::string nlm_derivation_to_text(const NLMDerivation& d);

}  // namespace hglc
