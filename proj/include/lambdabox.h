/* C API for the lambda-box toolchain.
 *
 * Handles are opaque; every function returns an lb_status (LB_OK on
 * success) and reports results through out-parameters. Strings returned
 * through char** out-parameters are owned by the caller and must be
 * released with lb_string_free(). On any failure lb_last_error() holds a
 * thread-local diagnostic until the next call on the same thread.
 */

#ifndef LAMBDABOX_H
#define LAMBDABOX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lb_term lb_term;   /* immutable term */
typedef struct lb_type lb_type;   /* immutable type */
typedef struct lb_dual lb_dual;   /* immutable dual-context term */

typedef enum lb_status {
  LB_OK = 0,
  LB_FALSE = 1,      /* a query answered "no" / not found within budget */
  LB_ERR_PARSE = 2,
  LB_ERR_TYPE = 3,
  LB_ERR_DOMAIN = 4, /* precondition violated (non-value, unrestricted, ...) */
  LB_ERR_FUEL = 5,
  LB_ERR_ARG = 6
} lb_status;

typedef enum lb_calc {
  LB_CALC_CBN = 0,
  LB_CALC_CBV = 1,
  LB_CALC_COMP = 2
} lb_calc;

/* Parse flags */
#define LB_PARSE_DEFAULT 0u
#define LB_PARSE_CPS_VARS 1u /* allow %k continuation variables */

const char* lb_version(void);
const char* lb_last_error(void);
void lb_string_free(char* s);

/* ---- terms and types ------------------------------------------------ */
lb_status lb_term_parse(const char* src, unsigned flags, lb_term** out);
lb_status lb_type_parse(const char* src, lb_type** out);
lb_status lb_term_print(const lb_term* t, char** out);
lb_status lb_type_print(const lb_type* t, char** out);
void lb_term_free(lb_term* t);
void lb_type_free(lb_type* t);

/* Alpha-equivalence of two terms. LB_OK = equal, LB_FALSE = not. */
lb_status lb_term_alpha_eq(const lb_term* a, const lb_term* b);

/* ---- typing ---------------------------------------------------------- */
/* Principal type of a closed term. */
lb_status lb_infer(const lb_term* t, lb_type** out);

/* ---- reduction ------------------------------------------------------- */
/* Normal form under a calculus; steps_out/trace_out may be NULL.
 * The trace holds one line per step: rule, position path, term. */
lb_status lb_normalize(const lb_term* t, lb_calc calc, long fuel,
                       lb_term** out, long* steps_out, char** trace_out);
/* LB_OK = equal, LB_FALSE = different normal forms. */
lb_status lb_equal(const lb_term* a, const lb_term* b, lb_calc calc, long fuel);

/* LB_OK = yes, LB_FALSE = no. */
lb_status lb_is_value(const lb_term* t);
lb_status lb_is_restricted(const lb_term* t);

/* ---- CPS ------------------------------------------------------------- */
lb_status lb_cps(const lb_term* t, lb_term** out);
lb_status lb_cpsx(const lb_term* t, lb_term** out);
lb_status lb_cps_type(const lb_type* t, lb_type** out);
lb_status lb_admin_nf(const lb_term* t, const char* cont_name, lb_term** out);
/* stratum_out: 'V', 'K' or 'A'; LB_FALSE when not in the CPS language. */
lb_status lb_classify_cps(const lb_term* t, char* stratum_out);
lb_status lb_uncps(const lb_term* t, lb_term** out);
lb_status lb_ceil(const lb_term* t, lb_term** out);
lb_status lb_floor(const lb_term* t, lb_term** out);
lb_status lb_let_encode(const lb_term* t, lb_term** out);

/* ---- IS4 ------------------------------------------------------------- */
/* theory: comma-separated fragments from "s4,st,sym,rules" or "all".
 * LB_OK = proven (trace_out optional), LB_FALSE = not found in budget. */
lb_status lb_s4_equal(const lb_term* a, const lb_term* b, const char* theory,
                      size_t budget, char** trace_out);

lb_status lb_dual_parse(const char* src, lb_dual** out);
lb_status lb_dual_print(const lb_dual* t, char** out);
void lb_dual_free(lb_dual* t);
lb_status lb_to_dual(const lb_term* t, lb_dual** out);    /* floorx */
lb_status lb_from_dual(const lb_dual* t, lb_term** out);  /* ceilx  */

/* ---- generator ------------------------------------------------------- */
/* Prints `count` well-typed closed-context terms, one per line. */
lb_status lb_generate(uint64_t seed, int max_size, int count, lb_calc calc,
                      int restricted, char** out);

/* ---- acceptance suite ------------------------------------------------ */
/* Runs the acceptance battery; returns LB_OK when every criterion passed,
 * LB_FALSE otherwise. `report_out` receives either a table or JSON. */
lb_status lb_suite_run(int terms_per_calc, int max_size, int pairs,
                       uint64_t seed, int as_json, int verbose,
                       char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* LAMBDABOX_H */
