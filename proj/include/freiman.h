/* C interface to the freiman library. Every call returns an fr_status; on failure
 * fr_last_error() holds a message for the calling thread. Strings returned through
 * char** are owned by the caller and released with fr_string_free. */
#ifndef FREIMAN_H
#define FREIMAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FR_API __declspec(dllexport)
#else
#define FR_API __attribute__((visibility("default")))
#endif

typedef enum fr_status {
    FR_OK = 0,
    FR_INVALID_ARGUMENT = 1,
    FR_PARSE_ERROR = 2,
    FR_INVALID_ELEMENT = 3,
    FR_GROUP_MISMATCH = 4,
    FR_OVERFLOW = 5,
    FR_EMPTY_SET = 6,
    FR_CAP_EXCEEDED = 7,
    FR_IO_ERROR = 8,
    FR_INTERNAL_ERROR = 9,
    FR_VERIFY_FAILED = 10
} fr_status;

typedef enum fr_format { FR_FORMAT_JSON = 0, FR_FORMAT_CSV = 1 } fr_format;

typedef struct fr_group fr_group;
typedef struct fr_set fr_set;

FR_API const char* fr_last_error(void);
FR_API const char* fr_status_name(fr_status status);
FR_API void fr_string_free(char* s);

/* "f2 n=12", "fp p=3 n=2", "zmod m=7", "z"; a leading "group" is accepted */
FR_API fr_status fr_group_parse(const char* text, fr_group** out);
FR_API fr_status fr_group_describe(const fr_group* g, char** out);
FR_API void fr_group_free(fr_group* g);

FR_API fr_status fr_elem_parse(const fr_group* g, const char* text, int64_t* out);
FR_API fr_status fr_elem_format(const fr_group* g, int64_t e, char** out);
FR_API fr_status fr_elem_add(const fr_group* g, int64_t a, int64_t b, int64_t* out);
FR_API fr_status fr_elem_sub(const fr_group* g, int64_t a, int64_t b, int64_t* out);
FR_API fr_status fr_elem_neg(const fr_group* g, int64_t a, int64_t* out);

FR_API fr_status fr_set_create(const fr_group* g, const int64_t* elems, size_t count, fr_set** out);
/* expected may be NULL; otherwise it must match the header or stands in for a missing one */
FR_API fr_status fr_set_parse(const char* text, const fr_group* expected, fr_set** out);
FR_API fr_status fr_set_read(const char* path, const fr_group* expected, fr_set** out);
FR_API fr_status fr_set_format(const fr_set* s, char** out);
FR_API fr_status fr_set_write(const fr_set* s, const char* path);
FR_API void fr_set_free(fr_set* s);

FR_API size_t fr_set_size(const fr_set* s);
FR_API fr_status fr_set_group(const fr_set* s, fr_group** out);
FR_API fr_status fr_set_elements(const fr_set* s, int64_t* buffer, size_t capacity, size_t* written);
FR_API fr_status fr_set_sum(const fr_set* a, const fr_set* b, fr_set** out);
FR_API fr_status fr_set_diff(const fr_set* a, const fr_set* b, fr_set** out);
/* exact energy as "Q/|A|^3" reduced to lowest terms, plus its float value */
FR_API fr_status fr_set_energy(const fr_set* s, char** exact, double* value);

FR_API fr_status fr_generate(const char* spec, fr_set** out);

typedef struct fr_extract_options {
    const char* eps;  /* rational text, NULL for 1/37 */
    const char* cmax; /* rational text, NULL for 8 */
    uint64_t slice_cap;
    uint64_t pair_cap;
    uint64_t seed;
    int reduce_by_stabilizer;
} fr_extract_options;

FR_API void fr_extract_options_default(fr_extract_options* options);

/* config_echo: JSON object describing the run, embedded verbatim under "config" (may be NULL) */
FR_API fr_status fr_extract(const fr_set* s, const fr_extract_options* options, const char* config_echo, fr_format format,
                            char** report);

/* Full run from a JSON run config: {"input": {"path" | "generator", "group"}, "eps", "cmax",
 * "slice_cap", "pair_cap", "seed", "reduce_by_stabilizer", "format": "json"|"csv", "output"}.
 * The normalized config is echoed into the report; the report is written atomically when
 * "output" is set and is returned in *report either way. */
FR_API fr_status fr_run_extract(const char* run_config_json, char** report);

/* Generates a set from a spec; writes it when out_path is non-NULL. *text may be NULL. */
FR_API fr_status fr_run_generate(const char* spec, const char* out_path, char** text);

/* suite: "oracle", "lemmas" or "pipeline"; trials 0 picks the suite default.
 * Returns FR_VERIFY_FAILED when a property fails; summary and counterexamples are set either way. */
FR_API fr_status fr_verify(const char* suite, uint64_t seed, uint64_t trials, char** summary, char** counterexamples);

#ifdef __cplusplus
}
#endif

#endif
