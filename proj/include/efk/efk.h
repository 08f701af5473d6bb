#ifndef EFK_EFK_H
#define EFK_EFK_H

#include <stddef.h>

#if defined(EFK_BUILDING_LIBRARY)
#define EFK_API __attribute__((visibility("default")))
#else
#define EFK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum efk_status {
  EFK_OK = 0,
  EFK_INVALID_ARGUMENT = 1,
  EFK_NOT_CONVERGED = 2,
  EFK_NUMERIC = 3,
  EFK_IO = 4,
  EFK_INTERNAL = 5,
  EFK_CHECK_FAILED = 6
} efk_status;

typedef struct efk_field efk_field_t;

typedef enum efk_discretization { EFK_SPECTRAL = 0, EFK_RADIAL = 1 } efk_discretization;

typedef struct efk_field_info {
  efk_discretization discretization;
  int dim;
  size_t size;          /* number of values returned by efk_field_values */
  int modes[2];         /* spectral modes per axis, 0 when unused */
  int n_points;         /* radial nodes, 0 for spectral fields */
  double sup_norm;
  double l2_norm;
  int has_beta;
  double beta;
} efk_field_info_t;

/* Message of the last failed call on this thread; empty after a success. */
EFK_API const char* efk_last_error(void);
EFK_API const char* efk_version(void);
/* Frees strings returned through char** out-parameters. */
EFK_API void efk_string_free(char* s);

EFK_API efk_status efk_field_load(const char* csv_path, efk_field_t** out);
EFK_API efk_status efk_field_save(const efk_field_t* field, const char* csv_path, int binary);
EFK_API void efk_field_free(efk_field_t* field);
EFK_API efk_status efk_field_info(const efk_field_t* field, efk_field_info_t* info);
/* Collocation grid values (spectral) or nodal values (radial); needs capacity >= info.size. */
EFK_API efk_status efk_field_values(const efk_field_t* field, double* out, size_t capacity);

/* config_json mirrors the run configuration; report_json receives the energy report and trace.
   EFK_NOT_CONVERGED still fills both outputs. */
EFK_API efk_status efk_minimize(const char* config_json, efk_field_t** field, char** report_json);
EFK_API efk_status efk_stability(const efk_field_t* field, double beta, char** report_json);
/* Branch points as JSON: arclength, beta, sup_norm, l2_norm, nu1 and the endpoint estimate. */
EFK_API efk_status efk_branch(const char* config_json, char** branch_json);
/* Writes quadrant.csv, tile.csv and report.json into out_dir when it is not NULL.
   EFK_CHECK_FAILED when the sign, window or smoothness check fails; outputs are still filled. */
EFK_API efk_status efk_saddle(double radius, double beta, int modes, const char* out_dir, efk_field_t** quadrant,
                              char** report_json);

/* suites: comma-separated names or "all". Returns EFK_CHECK_FAILED when a primary entry fails. */
EFK_API efk_status efk_verify(const char* suites, int quick, const char* plot_dir, char** scorecard_json);
EFK_API efk_status efk_scorecard_diff(const char* a_json, const char* b_json, char** diff_json);

EFK_API efk_status efk_critical_radius(double beta, int dim, double* radius);

#ifdef __cplusplus
}
#endif

#endif
