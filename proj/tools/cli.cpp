// Command-line front end. Everything goes through the C API in
// hglc/hglc.h; this translation unit does not touch the C++ core.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "hglc/hglc.h"

namespace {

struct CtxGuard {
  hglc_ctx* ctx = hglc_ctx_new();
  ~CtxGuard() { hglc_ctx_free(ctx); }
};

struct StrGuard {
  char* s = nullptr;
  ~StrGuard() { hglc_string_free(s); }
};

struct GraphGuard {
  hglc_graph* g = nullptr;
  ~GraphGuard() { hglc_graph_free(g); }
};

int fail(hglc_ctx* ctx) {
  std::cerr << "error: " << hglc_last_error(ctx) << "\n";
  return 3;
}

// --sig accepts a path to a signature JSON file, or the JSON itself when
// the value starts with '{'
int apply_signature(hglc_ctx* ctx, const std::string& sig) {
  if (sig.empty()) return 0;
  std::string json = sig;
  if (sig[0] != '{') {
    std::ifstream in(sig);
    if (!in) {
      std::cerr << "error: cannot open signature file '" << sig << "'\n";
      return 3;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    json = buf.str();
  }
  if (hglc_set_signature_json(ctx, json.c_str()) != HGLC_OK)
    return fail(ctx);
  return 0;
}

int report_verdict(hglc_ctx* ctx, hglc_verdict v, char* derivation,
                   bool as_json, int kind) {
  StrGuard d;
  d.s = derivation;
  const char* name = v == HGLC_DERIVABLE     ? "derivable"
                     : v == HGLC_UNDERIVABLE ? "underivable"
                                             : "exhausted";
  if (as_json) {
    std::cout << "{\"verdict\":\"" << name << "\""
              << (d.s ? std::string(",\"derivation\":") + d.s : "") << "}\n";
  } else {
    std::cout << name << "\n";
    if (d.s) {
      StrGuard text;
      if (hglc_derivation_text(ctx, d.s, kind, &text.s) != HGLC_OK)
        return fail(ctx);
      std::cout << text.s;
    }
  }
  if (v == HGLC_DERIVABLE) return 0;
  if (v == HGLC_UNDERIVABLE) return 1;
  std::cerr << "search budget exhausted; no verdict\n";
  return 2;
}

std::string read_input(const std::string& path) {
  std::stringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) return "";
    buf << in.rdbuf();
  }
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergraph Lambek calculus toolkit"};
  app.require_subcommand(1);

  std::string sequent, sig, out_path, graph_text, database_text, in_path;
  std::string atoms = "p,q";
  int budget = 64, depth = 2, leaves = 3, total = 4, workers = 1;
  bool as_json = false;

  auto add_sig = [&](CLI::App* cmd) {
    cmd->add_option("--sig", sig, "signature JSON file (or inline JSON)");
  };

  CLI::App* prove_nlm = app.add_subcommand(
      "prove-nlm", "decide an NL<> sequent: \"<database> -> <formula>\"");
  prove_nlm->add_option("sequent", sequent)->required();
  add_sig(prove_nlm);
  prove_nlm->add_option("--budget", budget);
  prove_nlm->add_flag("--json", as_json);

  CLI::App* prove_hl = app.add_subcommand(
      "prove-hl", "decide an HL sequent: \"<graph> -> <formula>\"");
  prove_hl->add_option("sequent", sequent)->required();
  prove_hl->add_option("--budget", budget);
  prove_hl->add_flag("--json", as_json);

  CLI::App* translate = app.add_subcommand(
      "translate", "translate an NL<> sequent into an HL sequent");
  translate->add_option("sequent", sequent)->required();
  add_sig(translate);

  CLI::App* recognize = app.add_subcommand(
      "recognize", "invert the translation on an HL sequent");
  recognize->add_option("sequent", sequent)->required();
  add_sig(recognize);

  CLI::App* equiv = app.add_subcommand(
      "equiv", "compare the two provers on an enumerated sequent space");
  add_sig(equiv);
  equiv->add_option("--atoms", atoms, "comma-separated atom names");
  equiv->add_option("--depth", depth, "max formula depth");
  equiv->add_option("--leaves", leaves, "max database leaves");
  equiv->add_option("--total", total, "max connectives per sequent");
  equiv->add_option("--budget", budget);
  equiv->add_option("--workers", workers);

  CLI::App* render = app.add_subcommand("render-dot", "render a graph");
  render->add_option("--graph", graph_text, "graph in textual syntax");
  render->add_option("--database", database_text,
                     "database whose htree image to render");
  add_sig(render);
  render->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* show = app.add_subcommand(
      "show-derivation", "replay a derivation JSON and print it");
  show->add_option("--in", in_path, "input file (default stdin)");
  bool kind_nlm = false, kind_hl = false;
  show->add_flag("--nlm", kind_nlm);
  show->add_flag("--hl", kind_hl);
  add_sig(show);

  CLI11_PARSE(app, argc, argv);

  CtxGuard guard;
  hglc_ctx* ctx = guard.ctx;
  if (!ctx) {
    std::cerr << "error: out of memory\n";
    return 3;
  }
  if (int rc = apply_signature(ctx, sig)) return rc;

  if (prove_nlm->parsed()) {
    hglc_verdict v;
    char* deriv = nullptr;
    if (hglc_prove_nlm(ctx, sequent.c_str(), budget, &v, &deriv) != HGLC_OK)
      return fail(ctx);
    return report_verdict(ctx, v, deriv, as_json, 1);
  }

  if (prove_hl->parsed()) {
    hglc_verdict v;
    char* deriv = nullptr;
    if (hglc_prove_hl(ctx, sequent.c_str(), budget, &v, &deriv) != HGLC_OK)
      return fail(ctx);
    return report_verdict(ctx, v, deriv, as_json, 0);
  }

  if (translate->parsed()) {
    StrGuard out;
    if (hglc_translate(ctx, sequent.c_str(), &out.s) != HGLC_OK)
      return fail(ctx);
    std::cout << out.s << "\n";
    return 0;
  }

  if (recognize->parsed()) {
    int found = 0;
    StrGuard out;
    if (hglc_recognize(ctx, sequent.c_str(), &found, &out.s) != HGLC_OK)
      return fail(ctx);
    if (!found) {
      std::cout << "not an image of the translation\n";
      return 1;
    }
    std::cout << out.s << "\n";
    return 0;
  }

  if (equiv->parsed()) {
    int ok = 0;
    StrGuard report;
    if (hglc_run_equiv(ctx, atoms.c_str(), depth, leaves, total, budget,
                       workers, &ok, &report.s) != HGLC_OK)
      return fail(ctx);
    std::cout << report.s << "\n";
    return ok ? 0 : 1;
  }

  if (render->parsed()) {
    if (graph_text.empty() == database_text.empty()) {
      std::cerr << "error: pass exactly one of --graph / --database\n";
      return 3;
    }
    GraphGuard g;
    if (!graph_text.empty()) {
      if (hglc_graph_parse(ctx, graph_text.c_str(), &g.g) != HGLC_OK)
        return fail(ctx);
    } else {
      if (hglc_htree(ctx, database_text.c_str(), &g.g) != HGLC_OK)
        return fail(ctx);
    }
    StrGuard dot;
    if (hglc_graph_to_dot(ctx, g.g, &dot.s) != HGLC_OK) return fail(ctx);
    if (out_path.empty()) {
      std::cout << dot.s;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 3;
      }
      out << dot.s;
    }
    return 0;
  }

  if (show->parsed()) {
    if (kind_nlm == kind_hl) {
      std::cerr << "error: pass exactly one of --hl / --nlm\n";
      return 3;
    }
    std::string input = read_input(in_path);
    if (input.empty()) {
      std::cerr << "error: empty derivation input\n";
      return 3;
    }
    StrGuard text;
    if (hglc_derivation_text(ctx, input.c_str(), kind_nlm ? 1 : 0,
                             &text.s) != HGLC_OK)
      return fail(ctx);
    std::cout << text.s;
    return 0;
  }

  return 3;
}
