#include "hglc/hglc.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "hglc/equiv.hpp"
#include "hglc/text.hpp"

struct hglc_ctx {
  hglc::Signature sig;
  std::unique_ptr<hglc::NLMProver> nlm;
  hglc::HLProver hl;
  std::string last_error;

  hglc::NLMProver& nlm_prover() {
    if (!nlm) nlm = std::make_unique<hglc::NLMProver>(sig);
    return *nlm;
  }
};

struct hglc_graph {
  hglc::Hypergraph g;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hglc_status status_of(hglc::error::code c) {
  switch (c) {
    case hglc::error::code::invalid: return HGLC_ERR_INVALID;
    case hglc::error::code::rank_mismatch: return HGLC_ERR_RANK;
    case hglc::error::code::not_found: return HGLC_ERR_NOT_FOUND;
    case hglc::error::code::parse: return HGLC_ERR_PARSE;
    case hglc::error::code::signature: return HGLC_ERR_SIGNATURE;
  }
  return HGLC_ERR_OTHER;
}

template <typename Fn>
hglc_status guarded(hglc_ctx* ctx, Fn&& fn) {
  if (!ctx) return HGLC_ERR_INVALID;
  try {
    ctx->last_error.clear();
    return fn();
  } catch (const hglc::error& e) {
    ctx->last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return HGLC_ERR_OTHER;
  } catch (...) {
    ctx->last_error = "unknown error";
    return HGLC_ERR_OTHER;
  }
}

hglc_verdict to_c_verdict(hglc::Verdict v) {
  switch (v) {
    case hglc::Verdict::derivable: return HGLC_DERIVABLE;
    case hglc::Verdict::underivable: return HGLC_UNDERIVABLE;
    default: return HGLC_EXHAUSTED;
  }
}

}  // namespace

extern "C" {

hglc_ctx* hglc_ctx_new(void) {
  try {
    return new hglc_ctx();
  } catch (...) {
    return nullptr;
  }
}

void hglc_ctx_free(hglc_ctx* ctx) { delete ctx; }

const char* hglc_last_error(const hglc_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

void hglc_string_free(char* s) { delete[] s; }

hglc_status hglc_set_signature_json(hglc_ctx* ctx, const char* json) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!json) throw hglc::error(hglc::error::code::invalid, "null input");
    hglc::Signature sig = hglc::signature_from_json(json);
    sig.validate();
    ctx->sig = std::move(sig);
    ctx->nlm.reset();
    return HGLC_OK;
  });
}

hglc_status hglc_get_signature_json(hglc_ctx* ctx, char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!out) throw hglc::error(hglc::error::code::invalid, "null output");
    *out = dup_string(hglc::signature_to_json(ctx->sig));
    return HGLC_OK;
  });
}

hglc_status hglc_graph_parse(hglc_ctx* ctx, const char* text,
                             hglc_graph** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!text || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    *out = new hglc_graph{hglc::parse_graph(text)};
    return HGLC_OK;
  });
}

hglc_status hglc_graph_from_json(hglc_ctx* ctx, const char* json,
                                 hglc_graph** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!json || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    *out = new hglc_graph{hglc::graph_from_json(json)};
    return HGLC_OK;
  });
}

void hglc_graph_free(hglc_graph* g) { delete g; }

int hglc_graph_nodes(const hglc_graph* g) {
  return g ? g->g.node_count() : -1;
}

int hglc_graph_edges(const hglc_graph* g) {
  return g ? g->g.edge_count() : -1;
}

int hglc_graph_rank(const hglc_graph* g) { return g ? g->g.rank() : -1; }

int hglc_graph_isomorphic(const hglc_graph* a, const hglc_graph* b) {
  if (!a || !b) return 0;
  try {
    return hglc::isomorphic(a->g, b->g) ? 1 : 0;
  } catch (...) {
    return 0;
  }
}

hglc_status hglc_graph_to_json(hglc_ctx* ctx, const hglc_graph* g,
                               char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!g || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    *out = dup_string(hglc::to_json(g->g));
    return HGLC_OK;
  });
}

hglc_status hglc_graph_to_dot(hglc_ctx* ctx, const hglc_graph* g,
                              char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!g || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    *out = dup_string(hglc::to_dot(g->g));
    return HGLC_OK;
  });
}

hglc_status hglc_htree(hglc_ctx* ctx, const char* database,
                       hglc_graph** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!database || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::DatabasePtr db = hglc::parse_database(database, ctx->sig);
    *out = new hglc_graph{hglc::htree(db, ctx->sig)};
    return HGLC_OK;
  });
}

hglc_status hglc_prove_nlm(hglc_ctx* ctx, const char* sequent, int budget,
                           hglc_verdict* verdict, char** derivation_json) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!sequent || !verdict)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::NLMSequent s = hglc::parse_nlm_sequent(sequent, ctx->sig);
    hglc::NLMProveResult res = ctx->nlm_prover().prove(s, budget);
    *verdict = to_c_verdict(res.verdict);
    if (derivation_json) {
      *derivation_json =
          res.derivation
              ? dup_string(hglc::nlm_derivation_to_json(*res.derivation))
              : nullptr;
    }
    return HGLC_OK;
  });
}

hglc_status hglc_prove_hl(hglc_ctx* ctx, const char* sequent, int budget,
                          hglc_verdict* verdict, char** derivation_json) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!sequent || !verdict)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::HLSequent s = hglc::parse_hl_sequent(sequent);
    hglc::HLProveResult res = ctx->hl.prove(s, budget);
    *verdict = to_c_verdict(res.verdict);
    if (derivation_json) {
      *derivation_json =
          res.derivation
              ? dup_string(hglc::hl_derivation_to_json(*res.derivation))
              : nullptr;
    }
    return HGLC_OK;
  });
}

hglc_status hglc_translate(hglc_ctx* ctx, const char* sequent, char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!sequent || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::NLMSequent s = hglc::parse_nlm_sequent(sequent, ctx->sig);
    *out = dup_string(
        hglc::format_hl_sequent(hglc::translate_sequent(s, ctx->sig)));
    return HGLC_OK;
  });
}

hglc_status hglc_recognize(hglc_ctx* ctx, const char* hl_sequent, int* found,
                           char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!hl_sequent || !found)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::HLSequent s = hglc::parse_hl_sequent(hl_sequent);
    auto res = hglc::recognize(s.antecedent, s.succedent, ctx->sig);
    *found = res ? 1 : 0;
    if (out)
      *out = res ? dup_string(hglc::format_nlm_sequent(*res)) : nullptr;
    return HGLC_OK;
  });
}

hglc_status hglc_derivation_text(hglc_ctx* ctx, const char* derivation_json,
                                 int kind, char** out) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!derivation_json || !out)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    std::string why;
    if (kind == 0) {
      hglc::HLDerivation d = hglc::hl_derivation_from_json(derivation_json);
      if (!hglc::check_derivation(d, &why))
        throw hglc::error(hglc::error::code::invalid,
                          "derivation does not replay: " + why);
      *out = dup_string(hglc::hl_derivation_to_text(d));
      return HGLC_OK;
    }
    if (kind == 1) {
      hglc::NLMDerivation d =
          hglc::nlm_derivation_from_json(derivation_json, ctx->sig);
      if (!hglc::check_derivation_nlm(d, ctx->sig, &why))
        throw hglc::error(hglc::error::code::invalid,
                          "derivation does not replay: " + why);
      *out = dup_string(hglc::nlm_derivation_to_text(d));
      return HGLC_OK;
    }
    throw hglc::error(hglc::error::code::invalid, "kind must be 0 or 1");
  });
}

hglc_status hglc_run_equiv(hglc_ctx* ctx, const char* atoms_csv,
                           int max_depth, int max_leaves, int max_total,
                           int budget, int workers, int* ok,
                           char** report_json) {
  return guarded(ctx, [&]() -> hglc_status {
    if (!atoms_csv || !ok)
      throw hglc::error(hglc::error::code::invalid, "null argument");
    hglc::EnumerationSpec spec;
    spec.sig = ctx->sig;
    std::stringstream ss(atoms_csv);
    std::string atom;
    while (std::getline(ss, atom, ','))
      if (!atom.empty()) spec.atoms.push_back(atom);
    spec.max_formula_depth = max_depth;
    spec.max_database_leaves = max_leaves;
    spec.max_total_connectives = max_total;
    spec.budget = budget;
    hglc::EquivReport rep = hglc::run_equivalence(spec, workers);
    *ok = rep.ok() ? 1 : 0;
    if (report_json) *report_json = dup_string(hglc::report_to_json(rep));
    return HGLC_OK;
  });
}

}  // extern "C"
