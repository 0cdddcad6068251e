#ifndef ET0L_H
#define ET0L_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call.
typedef enum Et0lStatus {
  ET0L_STATUS_OK = 0,
  ET0L_STATUS_NULL_ARGUMENT = 1,
  ET0L_STATUS_INVALID_UTF8 = 2,
  ET0L_STATUS_SCHEMA = 3,
  ET0L_STATUS_ALPHABET = 4,
  ET0L_STATUS_MALFORMED_REGEX = 5,
  ET0L_STATUS_CONFIGURATION = 6,
  ET0L_STATUS_NOT_NORMALIZED = 7,
  ET0L_STATUS_CLASSIFICATION = 8,
  ET0L_STATUS_SYMMETRY = 9,
  ET0L_STATUS_PERMUTATION = 10,
  ET0L_STATUS_UNSUPPORTED = 11,
  ET0L_STATUS_IO = 12,
  ET0L_STATUS_INTERNAL = 13,
} Et0lStatus;

// A parsed ET0L grammar.
typedef struct Et0lGrammarHandle Et0lGrammarHandle;

// A group of tree automorphisms given by a Σ-automaton.
typedef struct Et0lGroupHandle Et0lGroupHandle;

// A check-stack pushdown machine.
typedef struct Et0lMachineHandle Et0lMachineHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *et0l_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void et0l_string_free(char *s);

// Parses a grammar from its JSON text.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum Et0lStatus et0l_grammar_parse(const char *json_text, struct Et0lGrammarHandle **out);

// # Safety
// `g` must come from this library and not be freed twice.
void et0l_grammar_free(struct Et0lGrammarHandle *g);

// The grammar as JSON text.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_grammar_serialize(const struct Et0lGrammarHandle *g, char **out);

// Terminal words of length at most `max_word`, as a JSON object
// `{"words": [...], "pruned": bool}` with words in shortlex order.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_grammar_enumerate(const struct Et0lGrammarHandle *g,
                                       size_t max_word,
                                       size_t max_control,
                                       char **out);

// Membership of `word`: writes 1 (derivable), 0 (not within the bound)
// or -1 (search budget exhausted).
//
// # Safety
// `g` must be a live handle, `word` a NUL-terminated string and
// `verdict` writable.
enum Et0lStatus et0l_grammar_contains(const struct Et0lGrammarHandle *g,
                                      const char *word,
                                      size_t max_control,
                                      int *verdict);

// A machine accepting the grammar's language.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_grammar_to_machine(const struct Et0lGrammarHandle *g,
                                        struct Et0lMachineHandle **out);

// Parses a machine from its JSON text.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum Et0lStatus et0l_machine_parse(const char *json_text, struct Et0lMachineHandle **out);

// # Safety
// `m` must come from this library and not be freed twice.
void et0l_machine_free(struct Et0lMachineHandle *m);

// The machine as JSON text.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_machine_serialize(const struct Et0lMachineHandle *m, char **out);

// Acceptance of `word` for some check-stack of length at most `max_cs`.
// A negative `slack` uses the default height allowance.
//
// # Safety
// `m` must be a live handle, `word` a NUL-terminated string and
// `accepted` writable.
enum Et0lStatus et0l_machine_accepts(const struct Et0lMachineHandle *m,
                                     const char *word,
                                     size_t max_cs,
                                     int slack,
                                     bool *accepted);

// Number of structural violations.
//
// # Safety
// `m` must be a live handle; `count` must be writable.
enum Et0lStatus et0l_machine_validate(const struct Et0lMachineHandle *m, size_t *count);

// The machine in single-push, single-pop form.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_machine_normalize(const struct Et0lMachineHandle *m,
                                       struct Et0lMachineHandle **out);

// A grammar for the language of a normalized machine.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_machine_to_grammar(const struct Et0lMachineHandle *m,
                                        struct Et0lGrammarHandle **out);

// Compares a grammar and a machine on all words up to `max_len`; writes a
// JSON report.
//
// # Safety
// `g` and `m` must be live handles; `out` must be writable.
enum Et0lStatus et0l_crosscheck(const struct Et0lGrammarHandle *g,
                                const struct Et0lMachineHandle *m,
                                size_t max_len,
                                size_t max_control,
                                char **out);

// Parses a group from its JSON text.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum Et0lStatus et0l_group_parse(const char *json_text, struct Et0lGroupHandle **out);

// # Safety
// `g` must come from this library and not be freed twice.
void et0l_group_free(struct Et0lGroupHandle *g);

// Image of `vertex` under `word` (generator names), first generator first.
//
// # Safety
// `g` must be a live handle, the strings NUL-terminated and `out` writable.
enum Et0lStatus et0l_group_eval(const struct Et0lGroupHandle *g,
                                const char *word,
                                const char *vertex,
                                char **out);

// Whether `word` acts trivially on the whole tree.
//
// # Safety
// `g` must be a live handle, `word` NUL-terminated and `trivial` writable.
enum Et0lStatus et0l_group_is_trivial(const struct Et0lGroupHandle *g,
                                      const char *word,
                                      bool *trivial);

// The co-word machine of the group.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_group_coword_machine(const struct Et0lGroupHandle *g,
                                          struct Et0lMachineHandle **out);

// Compares the co-word machine with the triviality oracle on all words of
// length at most `max_len`; writes a JSON report.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum Et0lStatus et0l_group_coword_crosscheck(const struct Et0lGroupHandle *g,
                                             size_t max_len,
                                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ET0L_H */
