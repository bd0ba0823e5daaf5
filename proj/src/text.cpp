#include "hglc/text.hpp"

#include <cctype>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "hglc/embed.hpp"

namespace hglc {

namespace {

struct Lexer {
  std::string src;
  size_t pos = 0;

  explicit Lexer(std::string s) : src(std::move(s)) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  char peek2() {
    skip_ws();
    return pos + 1 < src.size() ? src[pos + 1] : '\0';
  }

  bool try_punct(const std::string& p) {
    skip_ws();
    if (src.compare(pos, p.size(), p) == 0) {
      pos += p.size();
      return true;
    }
    return false;
  }
  void expect_punct(const std::string& p, const std::string& what) {
    if (!try_punct(p)) fail("expected '" + p + "' " + what);
  }

  std::optional<std::string> try_ident() {
    skip_ws();
    size_t s = pos;
    if (s >= src.size()) return std::nullopt;
    char c = src[s];
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
      return std::nullopt;
    size_t e = s + 1;
    while (e < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_'))
      ++e;
    pos = e;
    return src.substr(s, e - s);
  }
  std::string expect_ident(const std::string& what) {
    auto id = try_ident();
    if (!id) fail("expected an identifier " + what);
    return *id;
  }

  std::optional<int> try_number() {
    skip_ws();
    size_t s = pos;
    if (s >= src.size() || !std::isdigit(static_cast<unsigned char>(src[s])))
      return std::nullopt;
    size_t e = s;
    long long val = 0;
    while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
      val = val * 10 + (src[e] - '0');
      if (val > 1000000) fail("number too large");
      ++e;
    }
    // A number directly followed by ident characters is not a number token.
    if (e < src.size() &&
        (std::isalpha(static_cast<unsigned char>(src[e])) || src[e] == '_'))
      return std::nullopt;
    pos = e;
    return static_cast<int>(val);
  }

  // Raw balanced {...} chunk, JSON-string aware.
  std::string balanced_braces() {
    skip_ws();
    if (pos >= src.size() || src[pos] != '{') fail("expected '{'");
    size_t start = pos;
    int depth = 0;
    bool in_str = false, esc = false;
    for (; pos < src.size(); ++pos) {
      char c = src[pos];
      if (in_str) {
        if (esc)
          esc = false;
        else if (c == '\\')
          esc = true;
        else if (c == '"')
          in_str = false;
        continue;
      }
      if (c == '"')
        in_str = true;
      else if (c == '{')
        ++depth;
      else if (c == '}' && --depth == 0) {
        ++pos;
        return src.substr(start, pos - start);
      }
    }
    fail("unbalanced '{'");
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw error(error::code::parse,
                msg + " at offset " + std::to_string(pos) + " in \"" + src +
                    "\"");
  }
};

// --- HL formulas and graphs ---

FormulaPtr parse_formula_expr(Lexer& lx, int default_rank = 1);
Hypergraph parse_graph_expr(Lexer& lx);

// Inside a slot a bare primitive takes the slot's rank; explicit ":r"
// always wins (and a wrong one fails at construction).
FormulaPtr parse_slot(Lexer& lx, int slot_rank) {
  if (lx.try_punct("$")) {
    if (lx.try_punct(":")) {
      auto num = lx.try_number();
      if (!num) lx.fail("expected a rank after '$:'");
      if (*num != slot_rank)
        lx.fail("hole rank " + std::to_string(*num) +
                " does not fit a rank-" + std::to_string(slot_rank) + " slot");
    }
    return Formula::hole(slot_rank);
  }
  return parse_formula_expr(lx, slot_rank);
}

Hypergraph parse_graph_expr(Lexer& lx) {
  if (lx.peek() == '{') return graph_from_json(lx.balanced_braces());
  std::string name = lx.expect_ident("starting a graph");

  auto pair_args = [&](int slot_rank) {
    lx.expect_punct("(", "after '" + name + "'");
    FormulaPtr a = parse_slot(lx, slot_rank);
    lx.expect_punct(",", "between slots");
    FormulaPtr b = parse_slot(lx, slot_rank);
    lx.expect_punct(")", "after slots");
    return std::make_pair(a, b);
  };
  auto one_arg = [&](int slot_rank) {
    lx.expect_punct("(", "after '" + name + "'");
    FormulaPtr a = parse_slot(lx, slot_rank);
    lx.expect_punct(")", "after slot");
    return a;
  };
  auto bracket_index = [&]() {
    lx.expect_punct("[", "after '" + name + "'");
    std::string idx = lx.expect_ident("as a mode or modality");
    lx.expect_punct("]", "after the index");
    return idx;
  };

  if (name == "handle") {
    lx.expect_punct("(", "after 'handle'");
    FormulaPtr f = lx.peek() == '$' ? parse_slot(lx, 1) : parse_formula_expr(lx);
    lx.expect_punct(")", "after the handle label");
    return handle(f);
  }
  if (name == "sg") {
    lx.expect_punct("(", "after 'sg'");
    std::vector<FormulaPtr> word;
    if (!lx.try_punct(")")) {
      word.push_back(parse_slot(lx, 2));
      while (lx.try_punct(",")) word.push_back(parse_slot(lx, 2));
      lx.expect_punct(")", "after the string-graph labels");
    }
    return string_graph(word);
  }
  if (name == "R") {
    std::string i = bracket_index();
    auto [a, b] = pair_args(1);
    return tree_branch(i, a, b);
  }
  if (name == "K") {
    std::string c = bracket_index();
    auto [a, b] = pair_args(1);
    return shared_branch(c, a, b);
  }
  if (name == "U") {
    std::string j = bracket_index();
    return unary_branch(j, one_arg(1));
  }
  if (name == "KO") {
    std::string o = lx.peek() == '[' ? bracket_index() : "O";
    auto [a, b] = pair_args(1);
    return hub_branch(o, a, b);
  }
  if (name == "Rb") {
    std::string i = bracket_index();
    auto [a, b] = pair_args(2);
    return wide_branch(i, a, b);
  }
  if (name == "Kb") {
    std::string c = bracket_index();
    auto [a, b] = pair_args(2);
    return parallel_branch(c, a, b);
  }
  if (name == "Ub") {
    std::string j = bracket_index();
    return unary_wide_branch(j, one_arg(2));
  }
  if (name == "RbO") {
    std::string o = lx.peek() == '[' ? bracket_index() : "O";
    auto [a, b] = pair_args(2);
    return series_pair(o, a, b);
  }
  lx.fail("unknown graph constructor '" + name + "'");
}

FormulaPtr parse_formula_expr(Lexer& lx, int default_rank) {
  if (lx.try_punct("$")) {
    int rank = default_rank;
    if (lx.try_punct(":")) {
      auto num = lx.try_number();
      if (!num) lx.fail("expected a rank after '$:'");
      rank = *num;
    }
    return Formula::hole(rank);
  }
  std::string first = lx.expect_ident("starting a formula");
  if (first == "x" && lx.peek() == '(') {
    lx.try_punct("(");
    Hypergraph g = parse_graph_expr(lx);
    lx.expect_punct(")", "after the product body");
    return Formula::product(std::move(g));
  }
  if (first == "div" && lx.peek() == '(') {
    lx.try_punct("(");
    FormulaPtr n = parse_formula_expr(lx);
    lx.expect_punct(",", "between numerator and denominator");
    Hypergraph d = parse_graph_expr(lx);
    lx.expect_punct(")", "after the denominator");
    return Formula::division(n, std::move(d));
  }
  // primitive: name segments joined by ':', optional trailing rank
  std::vector<std::string> segs{first};
  std::optional<int> rank;
  while (lx.try_punct(":")) {
    if (auto num = lx.try_number()) {
      rank = *num;
      break;
    }
    segs.push_back(lx.expect_ident("after ':' in a primitive name"));
  }
  std::string pname = segs[0];
  for (size_t i = 1; i < segs.size(); ++i) pname += ":" + segs[i];
  return Formula::primitive(pname, rank.value_or(default_rank));
}

// --- pretty-printing graphs back to constructor syntax ---

std::string format_graph(const Hypergraph& g);

std::string fmt_slot(const FormulaPtr& f) { return format_formula(f); }

std::optional<std::string> strip_prefix(const std::string& s,
                                        const std::string& prefix) {
  if (s.rfind(prefix, 0) == 0) return s.substr(prefix.size());
  return std::nullopt;
}

// Mode/modality name of a structural edge label ("mode:i" / "mod:j").
std::optional<std::string> structural_index(const FormulaPtr& f,
                                            const char* prefix) {
  if (f->kind() != FormulaKind::primitive) return std::nullopt;
  return strip_prefix(f->name(), prefix);
}

std::optional<std::string> try_constructor_form(const Hypergraph& g) {
  // handle(f)
  if (g.edge_count() == 1) {
    const FormulaPtr& lab = g.edges()[0].label;
    if (isomorphic(g, handle(lab))) return "handle(" + fmt_slot(lab) + ")";
  }
  // sg(...): follow the path from ext[0]
  if (g.rank() == 2) {
    bool all2 = true;
    for (const auto& e : g.edges()) all2 = all2 && e.att.size() == 2;
    if (all2) {
      std::vector<FormulaPtr> word;
      std::vector<char> used(g.edge_count(), 0);
      int cur = g.ext()[0];
      bool ok = true;
      for (int step = 0; step < g.edge_count() && ok; ++step) {
        int found = -1;
        for (int e = 0; e < g.edge_count(); ++e) {
          if (used[e] || g.edges()[e].att[0] != cur) continue;
          if (found >= 0) {
            ok = false;
            break;
          }
          found = e;
        }
        if (found < 0) ok = false;
        if (!ok) break;
        used[found] = 1;
        word.push_back(g.edges()[found].label);
        cur = g.edges()[found].att[1];
      }
      if (ok && cur == g.ext()[1]) {
        try {
          if (isomorphic(g, string_graph(word))) {
            std::string out = "sg(";
            for (size_t i = 0; i < word.size(); ++i)
              out += (i ? ", " : "") + fmt_slot(word[i]);
            return out + ")";
          }
        } catch (const error&) {
        }
      }
    }
  }

  struct Probe {
    const char* ctor;
    const char* prefix;
    int struct_rank;
    int slots;
    Hypergraph (*build1)(const std::string&, const FormulaPtr&);
    Hypergraph (*build2)(const std::string&, const FormulaPtr&,
                         const FormulaPtr&);
  };
  static const Probe probes[] = {
      {"R", "mode:", 3, 2, nullptr, &tree_branch},
      {"K", "mode:", 2, 2, nullptr, &shared_branch},
      {"KO", "mode:", 2, 2, nullptr, &hub_branch},
      {"U", "mod:", 2, 1, &unary_branch, nullptr},
      {"Rb", "mode:", 6, 2, nullptr, &wide_branch},
      {"Kb", "mode:", 4, 2, nullptr, &parallel_branch},
      {"Ub", "mod:", 4, 1, &unary_wide_branch, nullptr},
      {"RbO", "mode:", 1, 2, nullptr, &series_pair},
  };
  for (const auto& p : probes) {
    if (g.edge_count() != p.slots + 1) continue;
    int s0 = -1;
    for (int e = 0; e < g.edge_count(); ++e)
      if (g.edge_rank(e) == p.struct_rank &&
          structural_index(g.edges()[e].label, p.prefix))
        s0 = e;
    if (s0 < 0) continue;
    std::string idx = *structural_index(g.edges()[s0].label, p.prefix);
    std::vector<FormulaPtr> labs;
    for (int e = 0; e < g.edge_count(); ++e)
      if (e != s0) labs.push_back(g.edges()[e].label);
    if (static_cast<int>(labs.size()) != p.slots) continue;
    try {
      Hypergraph rebuilt = p.slots == 1 ? p.build1(idx, labs[0])
                                        : p.build2(idx, labs[0], labs[1]);
      if (!isomorphic(g, rebuilt) && p.slots == 2) {
        std::swap(labs[0], labs[1]);
        rebuilt = p.build2(idx, labs[0], labs[1]);
        if (!isomorphic(g, rebuilt)) continue;
      } else if (!isomorphic(g, rebuilt)) {
        continue;
      }
      std::string name = p.ctor;
      std::string out = name;
      if (name == "KO" || name == "RbO") {
        if (idx != "O") out += "[" + idx + "]";
      } else {
        out += "[" + idx + "]";
      }
      out += "(" + fmt_slot(labs[0]);
      if (p.slots == 2) out += ", " + fmt_slot(labs[1]);
      return out + ")";
    } catch (const error&) {
    }
  }
  return std::nullopt;
}

std::string format_graph(const Hypergraph& g) {
  if (auto pretty = try_constructor_form(g)) return *pretty;
  return to_json(g);
}

// --- NL<> formulas and databases ---

NLMFormulaPtr parse_nlm_expr(Lexer& lx, const Signature& sig);

NLMFormulaPtr parse_nlm_unary(Lexer& lx, const Signature& sig) {
  if (lx.try_punct("<>")) {
    std::string j = lx.expect_ident("after '<>'");
    if (!sig.has_modality(j))
      lx.fail("'" + j + "' is not a modality of the signature");
    return NLMFormula::dia(j, parse_nlm_unary(lx, sig));
  }
  if (lx.try_punct("[]")) {
    std::string j = lx.expect_ident("after '[]'");
    if (!sig.has_modality(j))
      lx.fail("'" + j + "' is not a modality of the signature");
    return NLMFormula::box(j, parse_nlm_unary(lx, sig));
  }
  if (lx.try_punct("(")) {
    NLMFormulaPtr f = parse_nlm_expr(lx, sig);
    lx.expect_punct(")", "closing the formula");
    return f;
  }
  return NLMFormula::atom(lx.expect_ident("starting a formula"));
}

NLMFormulaPtr parse_nlm_expr(Lexer& lx, const Signature& sig) {
  NLMFormulaPtr l = parse_nlm_unary(lx, sig);
  char op = lx.peek();
  if (op != '*' && op != '\\' && op != '/') return l;
  lx.try_punct(std::string(1, op));
  std::string mode = lx.expect_ident("as a mode");
  if (!sig.has_mode(mode))
    lx.fail("'" + mode + "' is not a mode of the signature");
  NLMFormulaPtr r = parse_nlm_unary(lx, sig);
  char next = lx.peek();
  if (next == '*' || next == '\\' || next == '/')
    lx.fail("chained connectives need parentheses");
  switch (op) {
    case '*': return NLMFormula::prod(mode, l, r);
    case '\\': return NLMFormula::under(mode, l, r);
    default: return NLMFormula::over(mode, l, r);
  }
}

DatabasePtr parse_database_expr(Lexer& lx, const Signature& sig) {
  if (lx.peek() == '(') {
    size_t save = lx.pos;
    try {
      lx.try_punct("(");
      DatabasePtr l = parse_database_expr(lx, sig);
      if (lx.try_punct(",")) {
        DatabasePtr r = parse_database_expr(lx, sig);
        lx.expect_punct(")", "closing the pair");
        lx.expect_punct("^", "after the pair");
        std::string mode = lx.expect_ident("as a mode");
        if (!sig.has_mode(mode))
          lx.fail("'" + mode + "' is not a mode of the signature");
        return Database::pair(mode, l, r);
      }
      lx.pos = save;
    } catch (const error&) {
      lx.pos = save;
    }
    return Database::leaf(parse_nlm_expr(lx, sig));
  }
  if (lx.peek() == '<' && lx.peek2() != '>') {
    lx.try_punct("<");
    DatabasePtr d = parse_database_expr(lx, sig);
    lx.expect_punct(">", "closing the angle bracket");
    lx.expect_punct("^", "after the angle bracket");
    std::string j = lx.expect_ident("as a modality");
    if (!sig.has_modality(j))
      lx.fail("'" + j + "' is not a modality of the signature");
    return Database::angle(j, d);
  }
  return Database::leaf(parse_nlm_expr(lx, sig));
}

nlohmann::json hl_deriv_json(const HLDerivation& d) {
  nlohmann::json j;
  j["rule"] = hl_rule_name(d.rule);
  j["antecedent"] = nlohmann::json::parse(to_json(d.conclusion.antecedent));
  j["succedent"] = format_formula(d.conclusion.succedent);
  if (d.edge >= 0) j["edge"] = d.edge;
  if (d.major) j["major"] = format_formula(d.major);
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises) j["premises"].push_back(hl_deriv_json(p));
  return j;
}

HLRule hl_rule_from_name(const std::string& name) {
  if (name == "ax") return HLRule::ax;
  if (name == "times_l") return HLRule::times_l;
  if (name == "times_r") return HLRule::times_r;
  if (name == "div_l") return HLRule::div_l;
  if (name == "div_r") return HLRule::div_r;
  throw error(error::code::parse, "unknown HL rule name '" + name + "'");
}

HLDerivation hl_deriv_from_json(const nlohmann::json& j) {
  HLSequent seq(graph_from_json(j.at("antecedent").dump()),
                parse_formula(j.at("succedent").get<std::string>()));
  HLDerivation d{std::move(seq), hl_rule_from_name(j.at("rule")), {}, -1,
                 nullptr};
  if (j.contains("edge")) d.edge = j.at("edge").get<int>();
  if (j.contains("major"))
    d.major = parse_formula(j.at("major").get<std::string>());
  for (const auto& p : j.at("premises")) d.premises.push_back(hl_deriv_from_json(p));
  return d;
}

NLMRule nlm_rule_from_name(const std::string& name) {
  static const std::pair<const char*, NLMRule> table[] = {
      {"ax", NLMRule::ax},           {"prod_l", NLMRule::prod_l},
      {"prod_r", NLMRule::prod_r},   {"under_l", NLMRule::under_l},
      {"under_r", NLMRule::under_r}, {"over_l", NLMRule::over_l},
      {"over_r", NLMRule::over_r},   {"dia_l", NLMRule::dia_l},
      {"dia_r", NLMRule::dia_r},     {"box_l", NLMRule::box_l},
      {"box_r", NLMRule::box_r},     {"perm", NLMRule::perm},
      {"assoc_l", NLMRule::assoc_l}, {"assoc_r", NLMRule::assoc_r},
  };
  for (const auto& [n, r] : table)
    if (name == n) return r;
  throw error(error::code::parse, "unknown NL<> rule name '" + name + "'");
}

nlohmann::json nlm_deriv_json(const NLMDerivation& d) {
  nlohmann::json j;
  j["rule"] = nlm_rule_name(d.rule);
  if (!d.index.empty()) j["index"] = d.index;
  if (!d.path.empty() || d.rule != NLMRule::ax) j["path"] = d.path;
  j["sequent"] = format_nlm_sequent(d.conclusion);
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises) j["premises"].push_back(nlm_deriv_json(p));
  return j;
}

NLMDerivation nlm_deriv_from_json(const nlohmann::json& j,
                                  const Signature& sig) {
  NLMDerivation d{parse_nlm_sequent(j.at("sequent").get<std::string>(), sig),
                  nlm_rule_from_name(j.at("rule")), "", {}, {}};
  if (j.contains("index")) d.index = j.at("index").get<std::string>();
  if (j.contains("path"))
    for (const auto& step : j.at("path")) d.path.push_back(step.get<int>());
  for (const auto& p : j.at("premises"))
    d.premises.push_back(nlm_deriv_from_json(p, sig));
  return d;
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Lexer lx(text);
  FormulaPtr f = parse_formula_expr(lx);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return f;
}

std::string format_formula(const FormulaPtr& f) {
  if (!f) throw error(error::code::invalid, "formatting a null formula");
  switch (f->kind()) {
    case FormulaKind::primitive:
      return f->name() + ":" + std::to_string(f->rank());
    case FormulaKind::hole:
      return "$:" + std::to_string(f->rank());
    case FormulaKind::product:
      return "x(" + format_graph(f->body()) + ")";
    case FormulaKind::division:
      return "div(" + format_formula(f->numerator()) + ", " +
             format_graph(f->body()) + ")";
  }
  return "";
}

Hypergraph parse_graph(const std::string& text) {
  Lexer lx(text);
  Hypergraph g = parse_graph_expr(lx);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return g;
}

HLSequent parse_hl_sequent(const std::string& text) {
  Lexer lx(text);
  Hypergraph g = parse_graph_expr(lx);
  lx.expect_punct("->", "between antecedent and succedent");
  FormulaPtr a = parse_formula_expr(lx);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return HLSequent(std::move(g), std::move(a));
}

std::string format_hl_sequent(const HLSequent& s) {
  return format_graph(s.antecedent) + " -> " + format_formula(s.succedent);
}

std::string hl_sequent_to_json(const HLSequent& s) {
  nlohmann::json j;
  j["antecedent"] = nlohmann::json::parse(to_json(s.antecedent));
  j["succedent"] = format_formula(s.succedent);
  return j.dump();
}

HLSequent hl_sequent_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    return HLSequent(graph_from_json(j.at("antecedent").dump()),
                     parse_formula(j.at("succedent").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse,
                std::string("bad sequent JSON: ") + e.what());
  }
}

NLMFormulaPtr parse_nlm_formula(const std::string& text, const Signature& sig) {
  Lexer lx(text);
  NLMFormulaPtr f = parse_nlm_expr(lx, sig);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return f;
}

DatabasePtr parse_database(const std::string& text, const Signature& sig) {
  Lexer lx(text);
  DatabasePtr d = parse_database_expr(lx, sig);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return d;
}

NLMSequent parse_nlm_sequent(const std::string& text, const Signature& sig) {
  Lexer lx(text);
  DatabasePtr d = parse_database_expr(lx, sig);
  lx.expect_punct("->", "between antecedent and succedent");
  NLMFormulaPtr f = parse_nlm_expr(lx, sig);
  if (!lx.eof()) lx.fail("unexpected trailing input");
  return NLMSequent{d, f};
}

std::string format_nlm_formula(const NLMFormulaPtr& f) {
  if (!f) throw error(error::code::invalid, "formatting a null formula");
  switch (f->kind()) {
    case NLMKind::atom:
      return f->name();
    case NLMKind::prod:
      return "(" + format_nlm_formula(f->left()) + " *" + f->index() + " " +
             format_nlm_formula(f->right()) + ")";
    case NLMKind::under:
      return "(" + format_nlm_formula(f->left()) + " \\" + f->index() + " " +
             format_nlm_formula(f->right()) + ")";
    case NLMKind::over:
      return "(" + format_nlm_formula(f->left()) + " /" + f->index() + " " +
             format_nlm_formula(f->right()) + ")";
    case NLMKind::dia:
      return "<>" + f->index() + " " + format_nlm_formula(f->arg());
    case NLMKind::box:
      return "[]" + f->index() + " " + format_nlm_formula(f->arg());
  }
  return "";
}

std::string format_database(const DatabasePtr& db) {
  if (!db) throw error(error::code::invalid, "formatting a null database");
  switch (db->kind()) {
    case DBKind::leaf:
      return format_nlm_formula(db->formula());
    case DBKind::pair:
      return "(" + format_database(db->left()) + " , " +
             format_database(db->right()) + ")^" + db->index();
    case DBKind::angle:
      return "< " + format_database(db->child()) + " >^" + db->index();
  }
  return "";
}

std::string format_nlm_sequent(const NLMSequent& s) {
  return format_database(s.antecedent) + " -> " +
         format_nlm_formula(s.succedent);
}

std::string hl_derivation_to_json(const HLDerivation& d) {
  return hl_deriv_json(d).dump();
}

HLDerivation hl_derivation_from_json(const std::string& text) {
  try {
    return hl_deriv_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse,
                std::string("bad derivation JSON: ") + e.what());
  }
}

std::string hl_derivation_to_text(const HLDerivation& d) {
  std::ostringstream out;
  std::function<void(const HLDerivation&, int)> walk =
      [&](const HLDerivation& node, int depth) {
        out << std::string(2 * depth, ' ') << "(" << hl_rule_name(node.rule)
            << ") " << format_hl_sequent(node.conclusion) << "\n";
        for (const auto& p : node.premises) walk(p, depth + 1);
      };
  walk(d, 0);
  return out.str();
}

std::string nlm_derivation_to_json(const NLMDerivation& d) {
  return nlm_deriv_json(d).dump();
}

NLMDerivation nlm_derivation_from_json(const std::string& text,
                                       const Signature& sig) {
  try {
    return nlm_deriv_from_json(nlohmann::json::parse(text), sig);
  } catch (const nlohmann::json::exception& e) {
    throw error(error::code::parse,
                std::string("bad derivation JSON: ") + e.what());
  }
}

std::string nlm_derivation_to_text(const NLMDerivation& d) {
  std::ostringstream out;
  std::function<void(const NLMDerivation&, int)> walk =
      [&](const NLMDerivation& node, int depth) {
        out << std::string(2 * depth, ' ') << "(" << nlm_rule_name(node.rule);
        if (!node.index.empty()) out << " " << node.index;
        out << ") " << format_nlm_sequent(node.conclusion) << "\n";
        for (const auto& p : node.premises) walk(p, depth + 1);
      };
  walk(d, 0);
  return out.str();
}

}  // namespace hglc
