#ifndef HGLC_H
#define HGLC_H

/* C interface to the hypergraph Lambek toolkit. All functions that can
 * fail return an hglc_status; on failure hglc_last_error(ctx) holds a
 * message valid until the next call through the same context. Strings
 * returned through char** are owned by the caller and released with
 * hglc_string_free. A context carries the active NL<> signature (empty
 * by default) plus memoizing prover state; contexts are not thread-safe,
 * use one per thread.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hglc_status {
  HGLC_OK = 0,
  HGLC_ERR_INVALID = 1,
  HGLC_ERR_RANK = 2,
  HGLC_ERR_NOT_FOUND = 3,
  HGLC_ERR_PARSE = 4,
  HGLC_ERR_SIGNATURE = 5,
  HGLC_ERR_OTHER = 6
} hglc_status;

typedef enum hglc_verdict {
  HGLC_DERIVABLE = 0,
  HGLC_UNDERIVABLE = 1,
  HGLC_EXHAUSTED = 2
} hglc_verdict;

typedef struct hglc_ctx hglc_ctx;
typedef struct hglc_graph hglc_graph;

hglc_ctx* hglc_ctx_new(void);
void hglc_ctx_free(hglc_ctx* ctx);
const char* hglc_last_error(const hglc_ctx* ctx);

void hglc_string_free(char* s);

/* Signature JSON:
 * {"modes":["x","c"],"modalities":["j"],"commutative":["c"],"associative":[]}
 */
hglc_status hglc_set_signature_json(hglc_ctx* ctx, const char* json);
hglc_status hglc_get_signature_json(hglc_ctx* ctx, char** out);

/* --- graphs (opaque) --- */

hglc_status hglc_graph_parse(hglc_ctx* ctx, const char* text,
                             hglc_graph** out);
hglc_status hglc_graph_from_json(hglc_ctx* ctx, const char* json,
                                 hglc_graph** out);
void hglc_graph_free(hglc_graph* g);
int hglc_graph_nodes(const hglc_graph* g);
int hglc_graph_edges(const hglc_graph* g);
int hglc_graph_rank(const hglc_graph* g);
int hglc_graph_isomorphic(const hglc_graph* a, const hglc_graph* b);
hglc_status hglc_graph_to_json(hglc_ctx* ctx, const hglc_graph* g,
                               char** out);
hglc_status hglc_graph_to_dot(hglc_ctx* ctx, const hglc_graph* g,
                              char** out);

/* htree image of a database under the context signature */
hglc_status hglc_htree(hglc_ctx* ctx, const char* database, hglc_graph** out);

/* --- proving --- */

/* Sequent syntax: "<database> -> <formula>" over the context signature.
 * verdict is always written on HGLC_OK; when derivation_json is non-NULL
 * and the sequent is derivable, the derivation tree is stored there. */
hglc_status hglc_prove_nlm(hglc_ctx* ctx, const char* sequent, int budget,
                           hglc_verdict* verdict, char** derivation_json);

/* Sequent syntax: "<graph> -> <formula>". */
hglc_status hglc_prove_hl(hglc_ctx* ctx, const char* sequent, int budget,
                          hglc_verdict* verdict, char** derivation_json);

/* --- translation and recognition --- */

/* NL<> sequent in, HL sequent out in textual syntax (re-parseable by
 * hglc_prove_hl). */
hglc_status hglc_translate(hglc_ctx* ctx, const char* sequent, char** out);

/* HL sequent in; *found = 1 and an NL<> sequent out when the input is
 * the image of a translation, *found = 0 otherwise. */
hglc_status hglc_recognize(hglc_ctx* ctx, const char* hl_sequent, int* found,
                           char** out);

/* --- derivation replay --- */

/* Re-checks a derivation produced by the prove calls and renders it as
 * indented text. kind: 0 = HL, 1 = NL<> (needs the signature). Replay
 * failure reports HGLC_ERR_INVALID. */
hglc_status hglc_derivation_text(hglc_ctx* ctx, const char* derivation_json,
                                 int kind, char** out);

/* --- equivalence harness --- */

/* Enumerates databases and formulas over the context signature with the
 * given atom inventory (comma separated) and bounds, proves each sequent
 * in both calculi and compares. *ok = 1 when the report is clean. */
hglc_status hglc_run_equiv(hglc_ctx* ctx, const char* atoms_csv,
                           int max_depth, int max_leaves, int max_total,
                           int budget, int workers, int* ok,
                           char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* HGLC_H */
