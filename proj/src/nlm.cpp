#include "hglc/nlm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <json.hpp>

#include "hglc/hypergraph.hpp"  // for hglc::error

namespace hglc {

namespace {

bool word_shaped(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

void check_name(const std::string& s, const char* what) {
  if (!word_shaped(s))
    throw error(error::code::invalid,
                std::string(what) + " '" + s + "' is not word-shaped");
}

}  // namespace

void Signature::validate() const {
  for (const auto& m : modes) check_name(m, "mode");
  for (const auto& j : modalities) check_name(j, "modality");
  for (const auto& c : commutative)
    if (!modes.count(c))
      throw error(error::code::signature,
                  "commutative mode '" + c + "' is not a mode");
  for (const auto& a : associative)
    if (!modes.count(a))
      throw error(error::code::signature,
                  "associative mode '" + a + "' is not a mode");
  for (const auto& m : modes)
    if (modalities.count(m))
      throw error(error::code::signature,
                  "'" + m + "' is both a mode and a modality");
}

std::string signature_to_json(const Signature& sig) {
  nlohmann::json j;
  j["modes"] = sig.modes;
  j["modalities"] = sig.modalities;
  j["commutative"] = sig.commutative;
  j["associative"] = sig.associative;
  return j.dump();
}

Signature signature_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse,
                std::string("bad signature JSON: ") + e.what());
  }
  Signature sig;
  auto read = [&](const char* field, std::set<std::string>& into) {
    if (!j.contains(field)) return;
    if (!j.at(field).is_array())
      throw error(error::code::parse,
                  std::string("signature field '") + field +
                      "' must be an array");
    for (const auto& v : j.at(field)) into.insert(v.get<std::string>());
  };
  read("modes", sig.modes);
  read("modalities", sig.modalities);
  read("commutative", sig.commutative);
  read("associative", sig.associative);
  sig.validate();
  return sig;
}

// --- formulas ---

NLMFormulaPtr NLMFormula::atom(const std::string& name) {
  check_name(name, "atom");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::atom;
  f->index_ = name;
  f->key_ = name;
  f->connectives_ = 0;
  return f;
}

NLMFormulaPtr NLMFormula::prod(const std::string& mode, NLMFormulaPtr a,
                               NLMFormulaPtr b) {
  check_name(mode, "mode");
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::prod;
  f->index_ = mode;
  f->left_ = std::move(a);
  f->right_ = std::move(b);
  f->key_ =
      "(" + f->left_->key() + " *" + mode + " " + f->right_->key() + ")";
  f->connectives_ =
      1 + f->left_->connective_count() + f->right_->connective_count();
  return f;
}

NLMFormulaPtr NLMFormula::under(const std::string& mode, NLMFormulaPtr b,
                                NLMFormulaPtr a) {
  check_name(mode, "mode");
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::under;
  f->index_ = mode;
  f->left_ = std::move(b);
  f->right_ = std::move(a);
  f->key_ =
      "(" + f->left_->key() + " \\" + mode + " " + f->right_->key() + ")";
  f->connectives_ =
      1 + f->left_->connective_count() + f->right_->connective_count();
  return f;
}

NLMFormulaPtr NLMFormula::over(const std::string& mode, NLMFormulaPtr a,
                               NLMFormulaPtr b) {
  check_name(mode, "mode");
  if (!a || !b) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::over;
  f->index_ = mode;
  f->left_ = std::move(a);
  f->right_ = std::move(b);
  f->key_ =
      "(" + f->left_->key() + " /" + mode + " " + f->right_->key() + ")";
  f->connectives_ =
      1 + f->left_->connective_count() + f->right_->connective_count();
  return f;
}

NLMFormulaPtr NLMFormula::dia(const std::string& modality, NLMFormulaPtr a) {
  check_name(modality, "modality");
  if (!a) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::dia;
  f->index_ = modality;
  f->left_ = std::move(a);
  f->key_ = "<>" + modality + " " + f->left_->key();
  f->connectives_ = 1 + f->left_->connective_count();
  return f;
}

NLMFormulaPtr NLMFormula::box(const std::string& modality, NLMFormulaPtr a) {
  check_name(modality, "modality");
  if (!a) throw error(error::code::invalid, "null subformula");
  auto f = std::shared_ptr<NLMFormula>(new NLMFormula());
  f->kind_ = NLMKind::box;
  f->index_ = modality;
  f->left_ = std::move(a);
  f->key_ = "[]" + modality + " " + f->left_->key();
  f->connectives_ = 1 + f->left_->connective_count();
  return f;
}

// --- databases ---

DatabasePtr Database::leaf(NLMFormulaPtr f) {
  if (!f) throw error(error::code::invalid, "null leaf formula");
  auto d = std::shared_ptr<Database>(new Database());
  d->kind_ = DBKind::leaf;
  d->formula_ = std::move(f);
  d->key_ = d->formula_->key();
  d->leaves_ = 1;
  d->connectives_ = d->formula_->connective_count();
  d->brackets_ = 0;
  return d;
}

DatabasePtr Database::pair(const std::string& mode, DatabasePtr l,
                           DatabasePtr r) {
  check_name(mode, "mode");
  if (!l || !r) throw error(error::code::invalid, "null database component");
  auto d = std::shared_ptr<Database>(new Database());
  d->kind_ = DBKind::pair;
  d->index_ = mode;
  d->left_ = std::move(l);
  d->right_ = std::move(r);
  d->key_ = "(" + d->left_->key() + " , " + d->right_->key() + ")^" + mode;
  d->leaves_ = d->left_->leaf_count() + d->right_->leaf_count();
  d->connectives_ =
      d->left_->connective_count() + d->right_->connective_count();
  d->brackets_ = 1 + d->left_->bracket_count() + d->right_->bracket_count();
  return d;
}

DatabasePtr Database::angle(const std::string& modality, DatabasePtr c) {
  check_name(modality, "modality");
  if (!c) throw error(error::code::invalid, "null database component");
  auto d = std::shared_ptr<Database>(new Database());
  d->kind_ = DBKind::angle;
  d->index_ = modality;
  d->left_ = std::move(c);
  d->key_ = "< " + d->left_->key() + " >^" + modality;
  d->leaves_ = d->left_->leaf_count();
  d->connectives_ = d->left_->connective_count();
  d->brackets_ = 1 + d->left_->bracket_count();
  return d;
}

// --- contexts ---

namespace {

void collect_contexts(const DatabasePtr& db, DBPath& cur,
                      std::vector<DBContext>& out) {
  out.push_back({cur, db});
  if (db->kind() == DBKind::pair) {
    cur.push_back(0);
    collect_contexts(db->left(), cur, out);
    cur.back() = 1;
    collect_contexts(db->right(), cur, out);
    cur.pop_back();
  } else if (db->kind() == DBKind::angle) {
    cur.push_back(0);
    collect_contexts(db->child(), cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<DBContext> contexts(const DatabasePtr& db) {
  if (!db) throw error(error::code::invalid, "null database");
  std::vector<DBContext> out;
  DBPath cur;
  collect_contexts(db, cur, out);
  return out;
}

DatabasePtr subterm_at(const DatabasePtr& db, const DBPath& path) {
  if (!db) throw error(error::code::invalid, "null database");
  DatabasePtr cur = db;
  for (int step : path) {
    switch (cur->kind()) {
      case DBKind::pair:
        if (step == 0)
          cur = cur->left();
        else if (step == 1)
          cur = cur->right();
        else
          throw error(error::code::not_found, "bad path step in pair");
        break;
      case DBKind::angle:
        if (step != 0)
          throw error(error::code::not_found, "bad path step in angle");
        cur = cur->child();
        break;
      default:
        throw error(error::code::not_found, "path leads through a leaf");
    }
  }
  return cur;
}

namespace {

DatabasePtr plug_at(const DatabasePtr& db, const DBPath& path, size_t i,
                    const DatabasePtr& repl) {
  if (i == path.size()) return repl;
  int step = path[i];
  switch (db->kind()) {
    case DBKind::pair:
      if (step == 0)
        return Database::pair(db->index(),
                              plug_at(db->left(), path, i + 1, repl),
                              db->right());
      if (step == 1)
        return Database::pair(db->index(), db->left(),
                              plug_at(db->right(), path, i + 1, repl));
      throw error(error::code::not_found, "bad path step in pair");
    case DBKind::angle:
      if (step != 0)
        throw error(error::code::not_found, "bad path step in angle");
      return Database::angle(db->index(),
                             plug_at(db->child(), path, i + 1, repl));
    default:
      throw error(error::code::not_found, "path leads through a leaf");
  }
}

}  // namespace

DatabasePtr plug(const DatabasePtr& db, const DBPath& path,
                 const DatabasePtr& replacement) {
  if (!db || !replacement)
    throw error(error::code::invalid, "null database");
  return plug_at(db, path, 0, replacement);
}

// --- structural classes ---

namespace {

using ClassCache = std::map<std::string, std::vector<DatabasePtr>>;

std::vector<DatabasePtr> class_of(const DatabasePtr& db, const Signature& sig,
                                  ClassCache& cache);

// Splits db along its maximal spine of `mode`-pairs into the subterms whose
// roots are not `mode`-pairs.
void flatten_spine(const DatabasePtr& db, const std::string& mode,
                   std::vector<DatabasePtr>& parts) {
  if (db->kind() == DBKind::pair && db->index() == mode) {
    flatten_spine(db->left(), mode, parts);
    flatten_spine(db->right(), mode, parts);
  } else {
    parts.push_back(db);
  }
}

// All mode-trees whose in-order leaves are drawn from
// parts[order[lo]], ..., parts[order[hi]] (one member each).
std::vector<DatabasePtr> trees_over(
    const std::string& mode, const std::vector<std::vector<DatabasePtr>>& parts,
    const std::vector<int>& order, int lo, int hi) {
  if (lo == hi) return parts[order[lo]];
  std::vector<DatabasePtr> out;
  for (int split = lo; split < hi; ++split) {
    auto ls = trees_over(mode, parts, order, lo, split);
    auto rs = trees_over(mode, parts, order, split + 1, hi);
    for (const auto& l : ls)
      for (const auto& r : rs) out.push_back(Database::pair(mode, l, r));
  }
  return out;
}

void sort_unique(std::vector<DatabasePtr>& v) {
  std::sort(v.begin(), v.end(),
            [](const DatabasePtr& a, const DatabasePtr& b) {
              return a->key() < b->key();
            });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const DatabasePtr& a, const DatabasePtr& b) {
                        return a->key() == b->key();
                      }),
          v.end());
}

std::vector<DatabasePtr> class_of(const DatabasePtr& db, const Signature& sig,
                                  ClassCache& cache) {
  auto hit = cache.find(db->key());
  if (hit != cache.end()) return hit->second;
  std::vector<DatabasePtr> out;
  switch (db->kind()) {
    case DBKind::leaf:
      out.push_back(db);
      break;
    case DBKind::angle: {
      for (const auto& m : class_of(db->child(), sig, cache))
        out.push_back(Database::angle(db->index(), m));
      break;
    }
    case DBKind::pair: {
      const std::string& mode = db->index();
      if (sig.is_associative(mode)) {
        // Rearranging an associative spine commutes with steps inside its
        // parts, so the class is: every bracketing (and, if commutative,
        // every order) of the parts, each part ranging over its own class.
        std::vector<DatabasePtr> raw;
        flatten_spine(db, mode, raw);
        std::vector<std::vector<DatabasePtr>> parts;
        parts.reserve(raw.size());
        for (const auto& p : raw) parts.push_back(class_of(p, sig, cache));
        int k = static_cast<int>(raw.size());
        std::vector<int> order(k);
        for (int i = 0; i < k; ++i) order[i] = i;
        if (sig.is_commutative(mode)) {
          do {
            auto ts = trees_over(mode, parts, order, 0, k - 1);
            out.insert(out.end(), ts.begin(), ts.end());
          } while (std::next_permutation(order.begin(), order.end()));
        } else {
          auto ts = trees_over(mode, parts, order, 0, k - 1);
          out.insert(out.end(), ts.begin(), ts.end());
        }
      } else {
        auto ls = class_of(db->left(), sig, cache);
        auto rs = class_of(db->right(), sig, cache);
        for (const auto& l : ls)
          for (const auto& r : rs) {
            out.push_back(Database::pair(mode, l, r));
            if (sig.is_commutative(mode))
              out.push_back(Database::pair(mode, r, l));
          }
      }
      break;
    }
  }
  sort_unique(out);
  cache.emplace(db->key(), out);
  return out;
}

}  // namespace

std::vector<DatabasePtr> structural_class(const DatabasePtr& db,
                                          const Signature& sig) {
  if (!db) throw error(error::code::invalid, "null database");
  ClassCache cache;
  return class_of(db, sig, cache);
}

DatabasePtr class_representative(const DatabasePtr& db, const Signature& sig) {
  auto klass = structural_class(db, sig);
  return klass.front();  // sorted by key; class always contains db
}

namespace {

// All single structural-rule applications available on db (read backward:
// db is the conclusion antecedent, result the premise antecedent).
std::vector<StructStep> one_steps(const DatabasePtr& db,
                                  const Signature& sig) {
  std::vector<StructStep> out;
  for (const auto& ctx : contexts(db)) {
    const DatabasePtr& sub = ctx.sub;
    if (sub->kind() != DBKind::pair) continue;
    const std::string& m = sub->index();
    if (sig.is_commutative(m)) {
      out.push_back({NLMRule::perm, ctx.path,
                     plug(db, ctx.path,
                          Database::pair(m, sub->right(), sub->left()))});
    }
    if (sig.is_associative(m)) {
      if (sub->left()->kind() == DBKind::pair && sub->left()->index() == m) {
        const DatabasePtr& nl = sub->left();
        out.push_back(
            {NLMRule::assoc_l, ctx.path,
             plug(db, ctx.path,
                  Database::pair(m, nl->left(),
                                 Database::pair(m, nl->right(),
                                                sub->right())))});
      }
      if (sub->right()->kind() == DBKind::pair &&
          sub->right()->index() == m) {
        const DatabasePtr& nr = sub->right();
        out.push_back(
            {NLMRule::assoc_r, ctx.path,
             plug(db, ctx.path,
                  Database::pair(m,
                                 Database::pair(m, sub->left(), nr->left()),
                                 nr->right()))});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<StructStep> structural_path(const DatabasePtr& from,
                                        const DatabasePtr& to,
                                        const Signature& sig) {
  if (!from || !to) throw error(error::code::invalid, "null database");
  if (same_database(from, to)) return {};
  // breadth-first over single steps; classes are finite
  std::map<std::string, std::pair<std::string, StructStep>> parent;
  std::map<std::string, DatabasePtr> seen;
  std::deque<DatabasePtr> queue;
  seen.emplace(from->key(), from);
  queue.push_back(from);
  while (!queue.empty()) {
    DatabasePtr cur = queue.front();
    queue.pop_front();
    for (const auto& step : one_steps(cur, sig)) {
      const std::string& k = step.result->key();
      if (seen.count(k)) continue;
      seen.emplace(k, step.result);
      parent.emplace(k, std::make_pair(cur->key(), step));
      if (k == to->key()) {
        std::vector<StructStep> chain;
        std::string at = k;
        while (at != from->key()) {
          auto& pr = parent.at(at);
          chain.push_back(pr.second);
          at = pr.first;
        }
        std::reverse(chain.begin(), chain.end());
        return chain;
      }
      queue.push_back(step.result);
    }
  }
  throw error(error::code::not_found,
              "databases are not in the same structural class");
}

// --- rule names ---

const char* nlm_rule_name(NLMRule r) {
  switch (r) {
    case NLMRule::ax: return "ax";
    case NLMRule::prod_l: return "prod_l";
    case NLMRule::prod_r: return "prod_r";
    case NLMRule::under_l: return "under_l";
    case NLMRule::under_r: return "under_r";
    case NLMRule::over_l: return "over_l";
    case NLMRule::over_r: return "over_r";
    case NLMRule::dia_l: return "dia_l";
    case NLMRule::dia_r: return "dia_r";
    case NLMRule::box_l: return "box_l";
    case NLMRule::box_r: return "box_r";
    case NLMRule::perm: return "perm";
    case NLMRule::assoc_l: return "assoc_l";
    case NLMRule::assoc_r: return "assoc_r";
  }
  return "?";
}

// --- rule checking ---

namespace {

bool fail_why(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

bool seq_eq(const NLMSequent& a, const NLMSequent& b) {
  return same_database(a.antecedent, b.antecedent) &&
         same_nlm_formula(a.succedent, b.succedent);
}

bool seq_ok(const NLMSequent& s) { return s.antecedent && s.succedent; }

}  // namespace

bool check_rule_nlm(const NLMDerivation& d, const Signature& sig,
                    std::string* why) {
  if (!seq_ok(d.conclusion)) return fail_why(why, "incomplete conclusion");
  for (const auto& p : d.premises)
    if (!seq_ok(p.conclusion)) return fail_why(why, "incomplete premise");
  const DatabasePtr& ante = d.conclusion.antecedent;
  const NLMFormulaPtr& succ = d.conclusion.succedent;
  auto premise_is = [&](size_t i, const DatabasePtr& a,
                        const NLMFormulaPtr& f) {
    return seq_eq(d.premises[i].conclusion, {a, f});
  };
  DatabasePtr sub;
  if (d.rule != NLMRule::ax) {
    try {
      sub = subterm_at(ante, d.path);
    } catch (const error&) {
      return fail_why(why, "path does not exist in the antecedent");
    }
  }
  switch (d.rule) {
    case NLMRule::ax: {
      if (!d.premises.empty()) return fail_why(why, "(ax) takes no premises");
      if (!d.path.empty()) return fail_why(why, "(ax) acts at the root");
      if (ante->kind() != DBKind::leaf)
        return fail_why(why, "(ax) needs a single-formula antecedent");
      if (!same_nlm_formula(ante->formula(), succ))
        return fail_why(why, "(ax) needs matching formulas");
      return true;
    }
    case NLMRule::prod_r: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (!d.path.empty()) return fail_why(why, "(*R) acts at the root");
      if (d.premises.size() != 2) return fail_why(why, "(*R) takes 2 premises");
      if (succ->kind() != NLMKind::prod || succ->index() != d.index)
        return fail_why(why, "(*R) needs a product succedent of the mode");
      if (ante->kind() != DBKind::pair || ante->index() != d.index)
        return fail_why(why, "(*R) needs a pair antecedent of the mode");
      if (!premise_is(0, ante->left(), succ->left()) ||
          !premise_is(1, ante->right(), succ->right()))
        return fail_why(why, "(*R) premises do not match");
      return true;
    }
    case NLMRule::prod_l: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (d.premises.size() != 1) return fail_why(why, "(*L) takes 1 premise");
      if (sub->kind() != DBKind::leaf ||
          sub->formula()->kind() != NLMKind::prod ||
          sub->formula()->index() != d.index)
        return fail_why(why, "(*L) needs a product leaf at the path");
      const NLMFormulaPtr& f = sub->formula();
      DatabasePtr repl = Database::pair(d.index, Database::leaf(f->left()),
                                        Database::leaf(f->right()));
      if (!premise_is(0, plug(ante, d.path, repl), succ))
        return fail_why(why, "(*L) premise does not match");
      return true;
    }
    case NLMRule::under_r: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (!d.path.empty()) return fail_why(why, "(\\R) acts at the root");
      if (d.premises.size() != 1) return fail_why(why, "(\\R) takes 1 premise");
      if (succ->kind() != NLMKind::under || succ->index() != d.index)
        return fail_why(why, "(\\R) needs an under succedent of the mode");
      DatabasePtr want =
          Database::pair(d.index, Database::leaf(succ->left()), ante);
      if (!premise_is(0, want, succ->right()))
        return fail_why(why, "(\\R) premise does not match");
      return true;
    }
    case NLMRule::over_r: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (!d.path.empty()) return fail_why(why, "(/R) acts at the root");
      if (d.premises.size() != 1) return fail_why(why, "(/R) takes 1 premise");
      if (succ->kind() != NLMKind::over || succ->index() != d.index)
        return fail_why(why, "(/R) needs an over succedent of the mode");
      DatabasePtr want =
          Database::pair(d.index, ante, Database::leaf(succ->right()));
      if (!premise_is(0, want, succ->left()))
        return fail_why(why, "(/R) premise does not match");
      return true;
    }
    case NLMRule::under_l: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (d.premises.size() != 2) return fail_why(why, "(\\L) takes 2 premises");
      if (sub->kind() != DBKind::pair || sub->index() != d.index ||
          sub->right()->kind() != DBKind::leaf)
        return fail_why(why, "(\\L) needs (Pi , B\\A)^i at the path");
      const NLMFormulaPtr& f = sub->right()->formula();
      if (f->kind() != NLMKind::under || f->index() != d.index)
        return fail_why(why, "(\\L) needs an under formula of the mode");
      if (!premise_is(0, plug(ante, d.path, Database::leaf(f->right())),
                      succ))
        return fail_why(why, "(\\L) main premise does not match");
      if (!premise_is(1, sub->left(), f->left()))
        return fail_why(why, "(\\L) argument premise does not match");
      return true;
    }
    case NLMRule::over_l: {
      if (!sig.has_mode(d.index)) return fail_why(why, "unknown mode");
      if (d.premises.size() != 2) return fail_why(why, "(/L) takes 2 premises");
      if (sub->kind() != DBKind::pair || sub->index() != d.index ||
          sub->left()->kind() != DBKind::leaf)
        return fail_why(why, "(/L) needs (A/B , Pi)^i at the path");
      const NLMFormulaPtr& f = sub->left()->formula();
      if (f->kind() != NLMKind::over || f->index() != d.index)
        return fail_why(why, "(/L) needs an over formula of the mode");
      if (!premise_is(0, plug(ante, d.path, Database::leaf(f->left())), succ))
        return fail_why(why, "(/L) main premise does not match");
      if (!premise_is(1, sub->right(), f->right()))
        return fail_why(why, "(/L) argument premise does not match");
      return true;
    }
    case NLMRule::dia_r: {
      if (!sig.has_modality(d.index)) return fail_why(why, "unknown modality");
      if (!d.path.empty()) return fail_why(why, "(<>R) acts at the root");
      if (d.premises.size() != 1)
        return fail_why(why, "(<>R) takes 1 premise");
      if (succ->kind() != NLMKind::dia || succ->index() != d.index)
        return fail_why(why, "(<>R) needs a diamond succedent of the modality");
      if (ante->kind() != DBKind::angle || ante->index() != d.index)
        return fail_why(why, "(<>R) needs an angle antecedent of the modality");
      if (!premise_is(0, ante->child(), succ->arg()))
        return fail_why(why, "(<>R) premise does not match");
      return true;
    }
    case NLMRule::dia_l: {
      if (!sig.has_modality(d.index)) return fail_why(why, "unknown modality");
      if (d.premises.size() != 1) return fail_why(why, "(<>L) takes 1 premise");
      if (sub->kind() != DBKind::leaf ||
          sub->formula()->kind() != NLMKind::dia ||
          sub->formula()->index() != d.index)
        return fail_why(why, "(<>L) needs a diamond leaf at the path");
      DatabasePtr repl = Database::angle(
          d.index, Database::leaf(sub->formula()->arg()));
      if (!premise_is(0, plug(ante, d.path, repl), succ))
        return fail_why(why, "(<>L) premise does not match");
      return true;
    }
    case NLMRule::box_r: {
      if (!sig.has_modality(d.index)) return fail_why(why, "unknown modality");
      if (!d.path.empty()) return fail_why(why, "([]R) acts at the root");
      if (d.premises.size() != 1)
        return fail_why(why, "([]R) takes 1 premise");
      if (succ->kind() != NLMKind::box || succ->index() != d.index)
        return fail_why(why, "([]R) needs a box succedent of the modality");
      if (!premise_is(0, Database::angle(d.index, ante), succ->arg()))
        return fail_why(why, "([]R) premise does not match");
      return true;
    }
    case NLMRule::box_l: {
      if (!sig.has_modality(d.index)) return fail_why(why, "unknown modality");
      if (d.premises.size() != 1) return fail_why(why, "([]L) takes 1 premise");
      if (sub->kind() != DBKind::angle || sub->index() != d.index ||
          sub->child()->kind() != DBKind::leaf)
        return fail_why(why, "([]L) needs < []A >^j at the path");
      const NLMFormulaPtr& f = sub->child()->formula();
      if (f->kind() != NLMKind::box || f->index() != d.index)
        return fail_why(why, "([]L) needs a box formula of the modality");
      if (!premise_is(0, plug(ante, d.path, Database::leaf(f->arg())), succ))
        return fail_why(why, "([]L) premise does not match");
      return true;
    }
    case NLMRule::perm: {
      if (!sig.is_commutative(d.index))
        return fail_why(why, "(P) needs a commutative mode");
      if (d.premises.size() != 1) return fail_why(why, "(P) takes 1 premise");
      if (sub->kind() != DBKind::pair || sub->index() != d.index)
        return fail_why(why, "(P) needs a pair of the mode at the path");
      DatabasePtr repl =
          Database::pair(d.index, sub->right(), sub->left());
      if (!premise_is(0, plug(ante, d.path, repl), succ))
        return fail_why(why, "(P) premise does not match");
      return true;
    }
    case NLMRule::assoc_l: {
      if (!sig.is_associative(d.index))
        return fail_why(why, "(A_l) needs an associative mode");
      if (d.premises.size() != 1) return fail_why(why, "(A_l) takes 1 premise");
      if (sub->kind() != DBKind::pair || sub->index() != d.index ||
          sub->left()->kind() != DBKind::pair ||
          sub->left()->index() != d.index)
        return fail_why(why, "(A_l) needs ((x,y),z) of the mode at the path");
      const DatabasePtr& nl = sub->left();
      DatabasePtr repl = Database::pair(
          d.index, nl->left(),
          Database::pair(d.index, nl->right(), sub->right()));
      if (!premise_is(0, plug(ante, d.path, repl), succ))
        return fail_why(why, "(A_l) premise does not match");
      return true;
    }
    case NLMRule::assoc_r: {
      if (!sig.is_associative(d.index))
        return fail_why(why, "(A_r) needs an associative mode");
      if (d.premises.size() != 1) return fail_why(why, "(A_r) takes 1 premise");
      if (sub->kind() != DBKind::pair || sub->index() != d.index ||
          sub->right()->kind() != DBKind::pair ||
          sub->right()->index() != d.index)
        return fail_why(why, "(A_r) needs (x,(y,z)) of the mode at the path");
      const DatabasePtr& nr = sub->right();
      DatabasePtr repl = Database::pair(
          d.index, Database::pair(d.index, sub->left(), nr->left()),
          nr->right());
      if (!premise_is(0, plug(ante, d.path, repl), succ))
        return fail_why(why, "(A_r) premise does not match");
      return true;
    }
  }
  return fail_why(why, "unknown rule");
}

bool check_derivation_nlm(const NLMDerivation& d, const Signature& sig,
                          std::string* why) {
  if (!check_rule_nlm(d, sig, why)) return false;
  for (const auto& p : d.premises)
    if (!check_derivation_nlm(p, sig, why)) return false;
  return true;
}

// --- prover ---

namespace {

void validate_formula_against(const NLMFormulaPtr& f, const Signature& sig) {
  switch (f->kind()) {
    case NLMKind::atom:
      return;
    case NLMKind::prod:
    case NLMKind::under:
    case NLMKind::over:
      if (!sig.has_mode(f->index()))
        throw error(error::code::signature,
                    "mode '" + f->index() + "' not in the signature");
      validate_formula_against(f->left(), sig);
      validate_formula_against(f->right(), sig);
      return;
    case NLMKind::dia:
    case NLMKind::box:
      if (!sig.has_modality(f->index()))
        throw error(error::code::signature,
                    "modality '" + f->index() + "' not in the signature");
      validate_formula_against(f->arg(), sig);
      return;
  }
}

void validate_database_against(const DatabasePtr& d, const Signature& sig) {
  switch (d->kind()) {
    case DBKind::leaf:
      validate_formula_against(d->formula(), sig);
      return;
    case DBKind::pair:
      if (!sig.has_mode(d->index()))
        throw error(error::code::signature,
                    "mode '" + d->index() + "' not in the signature");
      validate_database_against(d->left(), sig);
      validate_database_against(d->right(), sig);
      return;
    case DBKind::angle:
      if (!sig.has_modality(d->index()))
        throw error(error::code::signature,
                    "modality '" + d->index() + "' not in the signature");
      validate_database_against(d->child(), sig);
      return;
  }
}

}  // namespace

NLMProver::NLMProver(Signature sig) : sig_(std::move(sig)) {
  sig_.validate();
}

NLMProveResult NLMProver::prove(const NLMSequent& s, int budget) {
  if (!s.antecedent || !s.succedent)
    throw error(error::code::invalid, "incomplete sequent");
  validate_database_against(s.antecedent, sig_);
  validate_formula_against(s.succedent, sig_);
  if (budget < 0) budget = 0;
  return search(s, budget);
}

NLMProveResult NLMProver::search(const NLMSequent& s, int budget) {
  std::vector<DatabasePtr> klass = structural_class(s.antecedent, sig_);
  const DatabasePtr& rep = klass.front();
  std::string key = rep->key() + " => " + s.succedent->key();

  // Rebases a derivation whose conclusion antecedent is any member of the
  // class onto s.antecedent by prefixing explicit structural steps.
  auto rebase = [&](const NLMDerivation& d) -> NLMDerivation {
    if (same_database(d.conclusion.antecedent, s.antecedent)) return d;
    auto steps =
        structural_path(s.antecedent, d.conclusion.antecedent, sig_);
    NLMDerivation cur = d;
    for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
      DatabasePtr before = k == 0 ? s.antecedent : steps[k - 1].result;
      NLMDerivation node;
      node.conclusion = {before, s.succedent};
      node.rule = steps[k].rule;
      node.path = steps[k].path;
      node.index = subterm_at(before, steps[k].path)->index();
      node.premises = {std::move(cur)};
      cur = std::move(node);
    }
    return cur;
  };

  auto hit = memo_.find(key);
  if (hit != memo_.end()) {
    const Entry& e = hit->second;
    if (e.verdict == Verdict::derivable)
      return {Verdict::derivable, rebase(*e.derivation)};
    if (e.verdict == Verdict::underivable) return {Verdict::underivable, {}};
    if (e.budget >= budget) return {Verdict::exhausted, {}};
    // a previous attempt ran out with a smaller budget; retry
  }

  // (ax)
  if (s.antecedent->kind() == DBKind::leaf &&
      same_nlm_formula(s.antecedent->formula(), s.succedent)) {
    NLMDerivation ax;
    ax.conclusion = s;
    ax.rule = NLMRule::ax;
    memo_[key] = {Verdict::derivable, ax, budget};
    return {Verdict::derivable, ax};
  }

  if (budget <= 0) {
    memo_[key] = {Verdict::exhausted, std::nullopt, budget};
    return {Verdict::exhausted, {}};
  }

  struct Expansion {
    DatabasePtr via;
    NLMRule rule;
    std::string index;
    DBPath path;
    std::vector<NLMSequent> premises;
  };
  std::vector<Expansion> exps;
  std::set<std::string> dedupe;
  auto add = [&](Expansion e) {
    std::string k = std::string(nlm_rule_name(e.rule)) + "|" + e.index;
    for (const auto& p : e.premises)
      k += "|" + p.antecedent->key() + " => " + p.succedent->key();
    if (dedupe.insert(k).second) exps.push_back(std::move(e));
  };

  const NLMFormulaPtr& succ = s.succedent;

  // right rules: for (*R) the premise split depends on the class member,
  // for the others any member gives a class-equal premise, so the given
  // antecedent suffices
  if (succ->kind() == NLMKind::prod) {
    for (const auto& via : klass)
      if (via->kind() == DBKind::pair && via->index() == succ->index())
        add({via,
             NLMRule::prod_r,
             succ->index(),
             {},
             {{via->left(), succ->left()}, {via->right(), succ->right()}}});
  } else if (succ->kind() == NLMKind::under) {
    add({s.antecedent,
         NLMRule::under_r,
         succ->index(),
         {},
         {{Database::pair(succ->index(), Database::leaf(succ->left()),
                          s.antecedent),
           succ->right()}}});
  } else if (succ->kind() == NLMKind::over) {
    add({s.antecedent,
         NLMRule::over_r,
         succ->index(),
         {},
         {{Database::pair(succ->index(), s.antecedent,
                          Database::leaf(succ->right())),
           succ->left()}}});
  } else if (succ->kind() == NLMKind::dia) {
    if (s.antecedent->kind() == DBKind::angle &&
        s.antecedent->index() == succ->index())
      add({s.antecedent,
           NLMRule::dia_r,
           succ->index(),
           {},
           {{s.antecedent->child(), succ->arg()}}});
  } else if (succ->kind() == NLMKind::box) {
    add({s.antecedent,
         NLMRule::box_r,
         succ->index(),
         {},
         {{Database::angle(succ->index(), s.antecedent), succ->arg()}}});
  }

  // left rules: over every class member and every position
  for (const auto& via : klass) {
    for (const auto& ctx : contexts(via)) {
      const DatabasePtr& sub = ctx.sub;
      if (sub->kind() == DBKind::leaf) {
        const NLMFormulaPtr& f = sub->formula();
        if (f->kind() == NLMKind::prod) {
          DatabasePtr repl =
              Database::pair(f->index(), Database::leaf(f->left()),
                             Database::leaf(f->right()));
          add({via,
               NLMRule::prod_l,
               f->index(),
               ctx.path,
               {{plug(via, ctx.path, repl), succ}}});
        } else if (f->kind() == NLMKind::dia) {
          DatabasePtr repl =
              Database::angle(f->index(), Database::leaf(f->arg()));
          add({via,
               NLMRule::dia_l,
               f->index(),
               ctx.path,
               {{plug(via, ctx.path, repl), succ}}});
        }
      } else if (sub->kind() == DBKind::pair) {
        if (sub->right()->kind() == DBKind::leaf) {
          const NLMFormulaPtr& f = sub->right()->formula();
          if (f->kind() == NLMKind::under && f->index() == sub->index())
            add({via,
                 NLMRule::under_l,
                 f->index(),
                 ctx.path,
                 {{plug(via, ctx.path, Database::leaf(f->right())), succ},
                  {sub->left(), f->left()}}});
        }
        if (sub->left()->kind() == DBKind::leaf) {
          const NLMFormulaPtr& f = sub->left()->formula();
          if (f->kind() == NLMKind::over && f->index() == sub->index())
            add({via,
                 NLMRule::over_l,
                 f->index(),
                 ctx.path,
                 {{plug(via, ctx.path, Database::leaf(f->left())), succ},
                  {sub->right(), f->right()}}});
        }
      } else {  // angle
        if (sub->child()->kind() == DBKind::leaf) {
          const NLMFormulaPtr& f = sub->child()->formula();
          if (f->kind() == NLMKind::box && f->index() == sub->index()) {
            DatabasePtr repl = Database::leaf(f->arg());
            add({via,
                 NLMRule::box_l,
                 f->index(),
                 ctx.path,
                 {{plug(via, ctx.path, repl), succ}}});
          }
        }
      }
    }
  }

  bool any_exhausted = false;
  for (const auto& e : exps) {
    std::vector<NLMDerivation> prem_ders;
    prem_ders.reserve(e.premises.size());
    bool all_ok = true;
    for (const auto& ps : e.premises) {
      NLMProveResult r = search(ps, budget - 1);
      if (r.verdict == Verdict::derivable) {
        prem_ders.push_back(std::move(*r.derivation));
      } else {
        if (r.verdict == Verdict::exhausted) any_exhausted = true;
        all_ok = false;
        break;
      }
    }
    if (!all_ok) continue;
    NLMDerivation node;
    node.conclusion = {e.via, s.succedent};
    node.rule = e.rule;
    node.index = e.index;
    node.path = e.path;
    node.premises = std::move(prem_ders);
    NLMDerivation full = rebase(node);
    memo_[key] = {Verdict::derivable, full, budget};
    return {Verdict::derivable, full};
  }

  if (any_exhausted) {
    memo_[key] = {Verdict::exhausted, std::nullopt, budget};
    return {Verdict::exhausted, {}};
  }
  memo_[key] = {Verdict::underivable, std::nullopt, budget};
  return {Verdict::underivable, {}};
}

}  // namespace hglc
