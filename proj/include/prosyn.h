/*
 * prosyn: synthesis of residential demand and rooftop-PV generation
 * profiles from limited smart-meter data.
 *
 * C interface to the shared library. All functions return a status code;
 * on failure prosyn_last_error() carries a message for the calling thread.
 * Strings returned through char** are heap-allocated and must be released
 * with prosyn_string_free().
 */
#ifndef PROSYN_H
#define PROSYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(PROSYN_BUILD_SHARED)
#define PROSYN_API __attribute__((visibility("default")))
#else
#define PROSYN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define PROSYN_SLOTS_PER_DAY 48

typedef enum prosyn_status {
  PROSYN_OK = 0,
  PROSYN_ERR_INVALID_ARG = 1, /* null pointer / malformed argument */
  PROSYN_ERR_CONFIG = 2,      /* bad option values */
  PROSYN_ERR_IO = 3,          /* file open/read/write failure */
  PROSYN_ERR_PARSE = 4,       /* malformed file content */
  PROSYN_ERR_DOMAIN = 5,      /* model/domain rule violated */
  PROSYN_ERR_INTERNAL = 6     /* unexpected failure */
} prosyn_status;

PROSYN_API const char* prosyn_version(void);

/* Message for the most recent failure on this thread ("" after success). */
PROSYN_API const char* prosyn_last_error(void);

PROSYN_API void prosyn_string_free(char* s);

/* ---------------- deterministic random streams ---------------- */

typedef struct prosyn_rng prosyn_rng;

PROSYN_API prosyn_status prosyn_rng_create(uint64_t seed, prosyn_rng** out);
PROSYN_API void prosyn_rng_destroy(prosyn_rng* rng);
PROSYN_API prosyn_status prosyn_rng_uniform(prosyn_rng* rng, double* out);
PROSYN_API prosyn_status prosyn_rng_normal(prosyn_rng* rng, double* out);
PROSYN_API prosyn_status prosyn_rng_gamma(prosyn_rng* rng, double shape,
                                          double* out);

/* ---------------- scalar model operations ---------------- */

/* Energy (kWh per half hour) to a discrete state: round(100 * kwh),
 * clamped to n_max. */
PROSYN_API prosyn_status prosyn_discretize(double kwh, int n_max, int* out);
PROSYN_API double prosyn_undiscretize(int state);

/* Geometric irradiance fraction on a tilted panel for slot 0..47. */
PROSYN_API prosyn_status prosyn_time_irradiance_factor(
    double latitude_deg, double tilt_deg, double azimuth_from_north_deg,
    int day_of_year, int slot, double* out);

/* Gaussian-smoothed probability row over the same support as `counts`.
 * out_probabilities must hold n doubles. */
PROSYN_API prosyn_status prosyn_kde_row(const double* counts, size_t n,
                                        double bandwidth,
                                        double* out_probabilities);

/* One Dirichlet(alpha) draw; out_q must hold n doubles. */
PROSYN_API prosyn_status prosyn_dirichlet_sample(const double* alpha, size_t n,
                                                 prosyn_rng* rng,
                                                 double* out_q);

PROSYN_API prosyn_status prosyn_autocorrelation(const double* series, size_t n,
                                                int lag, double* out);

/* Mean absolute relative error in percent, skipping observed-zero slots. */
PROSYN_API prosyn_status prosyn_mae_percent(const double* observed,
                                            const double* synthetic, size_t n,
                                            double* out);

/* ---------------- day-profile stores ---------------- */

typedef struct prosyn_profiles prosyn_profiles;

PROSYN_API prosyn_status prosyn_profiles_load(const char* path,
                                              prosyn_profiles** out);
PROSYN_API prosyn_status prosyn_profiles_save(const prosyn_profiles* profiles,
                                              const char* path);
PROSYN_API prosyn_status prosyn_profiles_count(const prosyn_profiles* profiles,
                                               size_t* out);
PROSYN_API void prosyn_profiles_destroy(prosyn_profiles* profiles);

/* ---------------- transition tensors and sampling ---------------- */

typedef struct prosyn_tensor prosyn_tensor;

/* day_type: "weekday" or "weekend". */
PROSYN_API prosyn_status prosyn_tensor_build(const prosyn_profiles* profiles,
                                             const char* day_type, int n_max,
                                             prosyn_tensor** out);
PROSYN_API prosyn_status prosyn_tensor_load(const char* path,
                                            prosyn_tensor** out);
PROSYN_API prosyn_status prosyn_tensor_save(const prosyn_tensor* tensor,
                                            const char* path);
PROSYN_API prosyn_status prosyn_tensor_total(const prosyn_tensor* tensor,
                                             double* out);
PROSYN_API void prosyn_tensor_destroy(prosyn_tensor* tensor);

typedef struct prosyn_chain prosyn_chain;

PROSYN_API prosyn_status prosyn_chain_create(const prosyn_tensor* tensor,
                                             double bandwidth,
                                             prosyn_chain** out);
/* out_kwh must hold PROSYN_SLOTS_PER_DAY doubles. Consecutive calls on one
 * chain produce consecutive days: each day's first transition conditions
 * on the previous day's last state. */
PROSYN_API prosyn_status prosyn_chain_sample_day(prosyn_chain* chain,
                                                 prosyn_rng* rng,
                                                 double* out_kwh);
PROSYN_API void prosyn_chain_destroy(prosyn_chain* chain);

/* ---------------- pipeline commands ----------------
 *
 * Each command takes a JSON options object and optionally returns a JSON
 * summary (pass NULL to discard). Unknown keys are rejected only where
 * noted; omitted keys take documented defaults. Paths are taken verbatim.
 *
 * gen_data:     {"out", "customers", "days", "seed", "start_date",
 *                "with_generation"}
 * ingest:       {"input", "out_store",
 *                "schema": {"customer_id", "timestamp", "demand",
 *                           "generation", "features": [..]},
 *                "holidays": ["YYYY-MM-DD", ..], "all_weekday"}
 * cluster:      {"store", "out_model", "method", "feature",
 *                "concentration", "prior_from_data", "prior_mean",
 *                "prior_variance", "new_cluster_variance", "k",
 *                "init_means": [..], "max_iter"}
 * assign:       {"cluster_model", "out_assignments", "out_dirichlet",
 *                "seed", "population", "feature_id", "id_prefix"}
 * build_demand: {"store", "out_tensor", "day_type", "n_max"}
 * build_solar:  {"store", "out_matrix",
 *                "solar": {"latitude", "tilt", "azimuth", "efficiency",
 *                          "area", "irradiance"}}
 * synth:        {"tensor", "out_dir", "ci_matrix", "cluster_model",
 *                "assignments", "seed", "prosumers", "days", "bandwidth",
 *                "ci_bandwidth", "reinforcement", "concentration",
 *                "shared_weather", "penetrations": [..],
 *                "solar": {.. incl "day_of_year"}, "capacity_feature",
 *                "id_prefix"}
 * validate:     {"observed_store", "synthetic", "out_report", "day_type",
 *                "lags": [..]}
 * report:       {"out_dir", "tensor", "slot" (1..48), "state_lo",
 *                "state_hi", "store"}
 */
PROSYN_API prosyn_status prosyn_cmd_gen_data(const char* options_json,
                                             char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_ingest(const char* options_json,
                                           char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_cluster(const char* options_json,
                                            char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_assign(const char* options_json,
                                           char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_build_demand(const char* options_json,
                                                 char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_build_solar(const char* options_json,
                                                char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_synth(const char* options_json,
                                          char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_validate(const char* options_json,
                                             char** summary_json);
PROSYN_API prosyn_status prosyn_cmd_report(const char* options_json,
                                           char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* PROSYN_H */
