#ifndef PATHRDF_H
#define PATHRDF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define PATHRDF_OK 0

#define PATHRDF_ERR_NULL 1

#define PATHRDF_ERR_UTF8 2

#define PATHRDF_ERR_SYNTAX 3

#define PATHRDF_ERR_DIALECT 4

#define PATHRDF_ERR_INVALID_QUERY 5

#define PATHRDF_ERR_UNKNOWN_GRAPH 6

#define PATHRDF_ERR_TRIPLE_CAP 7

#define PATHRDF_ERR_CONFIG 8

#define PATHRDF_ERR_GRAPH 9

#define PATHRDF_ERR_TOO_LARGE 10

#define PATHRDF_ERR_PANIC 11

// A parsed graph and the prefixes used to print its terms.
typedef struct PathrdfGraph PathrdfGraph;

// Query answers as a table of rendered terms.
typedef struct PathrdfResult PathrdfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses N-Triples text into a new graph.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
int32_t pathrdf_graph_parse(const char *text, struct PathrdfGraph **out);

// # Safety
// `g` must be NULL or a graph from this library that is not used again.
void pathrdf_graph_free(struct PathrdfGraph *g);

// Number of triples, or 0 for NULL.
//
// # Safety
// `g` must be NULL or a live graph handle.
size_t pathrdf_graph_len(const struct PathrdfGraph *g);

// Saturates `g` into a new graph.
//
// # Safety
// `g` must be a live graph handle and `out` a writable pointer.
int32_t pathrdf_graph_closure(const struct PathrdfGraph *g,
                              bool reflexive,
                              bool extended,
                              struct PathrdfGraph **out);

// The graph as N-Triples text, freed with `pathrdf_string_free`. NULL if
// `g` is NULL.
//
// # Safety
// `g` must be NULL or a live graph handle.
char *pathrdf_graph_to_ntriples(const struct PathrdfGraph *g);

// Evaluates `query` over `g` under `semantics` (`simple`, `rdfs-closure`,
// `rdfs-psparql`, `rdfs-nsparql` or `rdfs-cpsparql`; NULL means simple).
//
// # Safety
// `g` must be a live graph handle, the strings NUL-terminated and `out`
// writable.
int32_t pathrdf_query(const struct PathrdfGraph *g,
                      const char *query,
                      const char *semantics,
                      struct PathrdfResult **out);

// # Safety
// `r` must be NULL or a live result handle.
size_t pathrdf_result_rows(const struct PathrdfResult *r);

// # Safety
// `r` must be NULL or a live result handle.
size_t pathrdf_result_cols(const struct PathrdfResult *r);

// Name of column `col` without the `?`, owned by the result. NULL when out
// of range.
//
// # Safety
// `r` must be NULL or a live result handle.
const char *pathrdf_result_var(const struct PathrdfResult *r, size_t col);

// Cell text owned by the result; NULL for an unbound variable or an index
// out of range.
//
// # Safety
// `r` must be NULL or a live result handle.
const char *pathrdf_result_cell(const struct PathrdfResult *r, size_t row, size_t col);

// Header line plus one tab-separated line per row, unbound cells empty.
// Freed with `pathrdf_string_free`.
//
// # Safety
// `r` must be NULL or a live result handle.
char *pathrdf_result_to_tsv(const struct PathrdfResult *r);

// # Safety
// `r` must be NULL or a result handle that is not used again.
void pathrdf_result_free(struct PathrdfResult *r);

// Rewrites a SPARQL query with `mode` (`psparql-tau`, `nsparql-phi` or
// `cpsparql-tau`) and returns the query text through `out`.
//
// # Safety
// The strings must be NUL-terminated and `out` writable.
int32_t pathrdf_rewrite(const char *query, const char *mode, char **out);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void pathrdf_string_free(char *s);

// Message of the last failed call on this thread, or NULL after a
// success. Valid until the next call into the library.
const char *pathrdf_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHRDF_H */
