#include "hglc/formula.hpp"

#include <algorithm>
#include <map>

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

}  // namespace

const std::string& label_key(const FormulaPtr& f) { return f->key(); }
int label_rank(const FormulaPtr& f) { return f->rank(); }
bool label_is_hole(const FormulaPtr& f) {
  return f->kind() == FormulaKind::hole;
}
const Alphabet& label_alphabet(const FormulaPtr& f) { return f->alphabet(); }
std::string label_text(const FormulaPtr& f) { return format_formula(f); }

FormulaPtr Formula::primitive(const std::string& name, int rank) {
  if (name.empty())
    throw error(error::code::invalid, "primitive with empty name");
  if (rank < 0) throw error(error::code::invalid, "negative rank");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = FormulaKind::primitive;
  f->name_ = name;
  f->rank_ = rank;
  f->key_ = "P" + std::to_string(rank) + ":" + std::to_string(name.size()) +
            ":" + name;
  f->alphabet_ = {{name, rank}};
  return f;
}

FormulaPtr Formula::hole(int rank) {
  if (rank < 0) throw error(error::code::invalid, "negative rank");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = FormulaKind::hole;
  f->rank_ = rank;
  f->key_ = "$" + std::to_string(rank);
  return f;
}

FormulaPtr Formula::product(Hypergraph body) {
  for (const auto& e : body.edges())
    if (label_is_hole(e.label))
      throw error(error::code::invalid,
                  "hole label inside a product hypergraph");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = FormulaKind::product;
  f->rank_ = body.rank();
  f->alphabet_ = body.alphabet();
  f->key_ = "X{" + body.canonical_key() + "}";
  f->body_ = std::move(body);
  return f;
}

FormulaPtr Formula::division(FormulaPtr numerator, Hypergraph denominator) {
  if (!numerator) throw error(error::code::invalid, "division without numerator");
  if (numerator->kind() == FormulaKind::hole)
    throw error(error::code::invalid, "hole as division numerator");
  int hole_edge = -1;
  for (int e = 0; e < denominator.edge_count(); ++e) {
    if (!label_is_hole(denominator.edges()[e].label)) continue;
    if (hole_edge >= 0)
      throw error(error::code::invalid,
                  "division denominator with two hole edges");
    hole_edge = e;
  }
  if (hole_edge < 0)
    throw error(error::code::invalid,
                "division denominator without a hole edge");
  if (numerator->rank() != denominator.rank())
    throw error(error::code::rank_mismatch,
                "division needs rk(numerator) == rk(denominator), got " +
                    std::to_string(numerator->rank()) + " and " +
                    std::to_string(denominator.rank()));
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = FormulaKind::division;
  f->rank_ = denominator.edge_rank(hole_edge);
  f->hole_edge_ = hole_edge;
  f->alphabet_ = denominator.alphabet();
  merge_alphabet(f->alphabet_, numerator->alphabet());
  f->key_ = "D{" + numerator->key() + "|" + denominator.canonical_key() + "}";
  f->numerator_ = std::move(numerator);
  f->body_ = std::move(denominator);
  return f;
}

const std::string& Formula::name() const {
  if (kind_ != FormulaKind::primitive)
    throw error(error::code::invalid, "name() on a non-primitive formula");
  return name_;
}

const Hypergraph& Formula::body() const {
  if (kind_ != FormulaKind::product && kind_ != FormulaKind::division)
    throw error(error::code::invalid, "body() on an atomic formula");
  return body_;
}

const FormulaPtr& Formula::numerator() const {
  if (kind_ != FormulaKind::division)
    throw error(error::code::invalid, "numerator() on a non-division");
  return numerator_;
}

int Formula::hole_edge() const {
  if (kind_ != FormulaKind::division)
    throw error(error::code::invalid, "hole_edge() on a non-division");
  return hole_edge_;
}

namespace {

void collect_subformulas(const FormulaPtr& f,
                         std::map<std::string, FormulaPtr>& seen) {
  if (!f || f->kind() == FormulaKind::hole) return;
  if (!seen.emplace(f->key(), f).second) return;
  if (f->kind() == FormulaKind::product || f->kind() == FormulaKind::division)
    for (const auto& e : f->body().edges())
      collect_subformulas(e.label, seen);
  if (f->kind() == FormulaKind::division)
    collect_subformulas(f->numerator(), seen);
}

void collect_head(const FormulaPtr& f,
                  std::map<std::string, FormulaPtr>& seen) {
  switch (f->kind()) {
    case FormulaKind::primitive:
      seen.emplace(f->key(), f);
      return;
    case FormulaKind::division:
      collect_head(f->numerator(), seen);
      return;
    case FormulaKind::product:
      for (const auto& e : f->body().edges()) collect_head(e.label, seen);
      return;
    case FormulaKind::hole:
      return;
  }
}

}  // namespace

std::vector<FormulaPtr> subformulas(const FormulaPtr& f) {
  std::map<std::string, FormulaPtr> seen;
  collect_subformulas(f, seen);
  std::vector<FormulaPtr> out;
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

std::vector<FormulaPtr> head(const FormulaPtr& f) {
  std::map<std::string, FormulaPtr> seen;
  collect_head(f, seen);
  std::vector<FormulaPtr> out;
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

bool is_skeleton_free(const FormulaPtr& f) {
  for (const auto& s : subformulas(f))
    if (s->kind() == FormulaKind::product && s->body().edge_count() == 0)
      return false;
  return true;
}

}  // namespace hglc
