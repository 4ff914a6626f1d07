/* C interface to the adaptive preparation library. Every function returns an
 * aprep_status; on failure aprep_last_error() describes the problem (per thread).
 * Strings handed out by the library are released with aprep_string_free. */
#ifndef APREP_APREP_H
#define APREP_APREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(APREP_BUILDING)
#define APREP_API __attribute__((visibility("default")))
#else
#define APREP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aprep_status {
    APREP_OK = 0,
    APREP_ERR_USAGE = 1,    /* invalid argument or flag */
    APREP_ERR_DATA = 2,     /* malformed or unusable input data, I/O */
    APREP_ERR_INTERNAL = 3  /* broken internal invariant */
} aprep_status;

typedef enum aprep_correction { APREP_CORRECTION_CHAIN = 0, APREP_CORRECTION_GF2 = 1 } aprep_correction;

typedef struct aprep_layout aprep_layout;
typedef struct aprep_circuit aprep_circuit;

typedef struct aprep_noise {
    double p1, p2, pm, pi;
} aprep_noise;

typedef struct aprep_prepare_options {
    uint64_t shots_x;
    uint64_t shots_z;
    uint64_t seed;
    aprep_noise noise;
    aprep_correction correction;
    unsigned threads;           /* 0: ADAPTIVE_PREP_THREADS or 1 */
    int with_exact_fidelity;    /* nonzero: records carry the exact overlap */
} aprep_prepare_options;

APREP_API const char *aprep_version(void);
APREP_API const char *aprep_last_error(void);
APREP_API void aprep_string_free(char *s);
APREP_API void aprep_prepare_options_default(aprep_prepare_options *opts);

APREP_API aprep_status aprep_layout_new_strip(int length, aprep_layout **out);
APREP_API void aprep_layout_free(aprep_layout *layout);
APREP_API aprep_status aprep_layout_to_json(const aprep_layout *layout, char **out_json);
APREP_API aprep_status aprep_layout_num_qubits(const aprep_layout *layout, size_t *out_data, size_t *out_total);

/* Shot stream: manifest line followed by one JSON record per shot. */
APREP_API aprep_status aprep_prepare(const aprep_layout *layout, const aprep_prepare_options *opts, char **out_stream);

/* Fidelity report for a shot stream. length 0 takes the strip length from the
 * stream's manifest. The bootstrap stream is keyed by `seed`. */
APREP_API aprep_status aprep_estimate(const char *stream, int length, unsigned resamples, uint64_t seed,
                                      char **out_report);

/* Causal-cone verdict and product-form ceiling. */
APREP_API aprep_status aprep_bound_report(int length, unsigned depth, double grid_step, char **out_report);

/* Random local circuits checked against the ceiling. */
APREP_API aprep_status aprep_bound_probe(int length, unsigned depth, uint64_t samples, uint64_t seed,
                                         char **out_report);

APREP_API aprep_status aprep_oracle_check(int length, uint64_t shots, uint64_t seed, int inject_phase_bug,
                                          char **out_report, int *out_passed);

APREP_API aprep_status aprep_circuit_parse(const char *text, aprep_circuit **out);
APREP_API void aprep_circuit_free(aprep_circuit *circuit);
APREP_API aprep_status aprep_circuit_serialize(const aprep_circuit *circuit, char **out_text);
APREP_API aprep_status aprep_circuit_depth(const aprep_circuit *circuit, size_t *out_depth);
/* One JSON line per shot with the classical registers, then a summary line. */
APREP_API aprep_status aprep_circuit_run(const aprep_circuit *circuit, uint64_t shots, uint64_t seed,
                                         const aprep_noise *noise, char **out_trace);
APREP_API aprep_status aprep_prep_circuit(const aprep_layout *layout, aprep_correction correction,
                                          aprep_circuit **out);

#ifdef __cplusplus
}
#endif

#endif
