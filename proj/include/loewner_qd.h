#ifndef LOEWNER_QD_H
#define LOEWNER_QD_H

#include <stddef.h>

#if defined(LQD_BUILDING_LIBRARY)
#define LQD_API __attribute__((visibility("default")))
#else
#define LQD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lqd_job lqd_job;
typedef struct lqd_result lqd_result;

typedef enum {
    LQD_OK = 0,
    LQD_ERR_PARSE = 1,     /* malformed job file or argument */
    LQD_ERR_INVALID = 2,   /* well-formed input outside the domain (bad direction, self-intersecting path, ...) */
    LQD_ERR_NUMERICAL = 3, /* Newton, stepping or branch failure during a run */
    LQD_ERR_IO = 4,
    LQD_ERR_NULL = 5,
    LQD_ERR_RANGE = 6,     /* sample or driver index out of range */
    LQD_ERR_INTERNAL = 7
} lqd_status;

typedef enum { LQD_CMD_TRACE = 0, LQD_CMD_MULTI, LQD_CMD_RADIAL, LQD_CMD_ORACLE, LQD_CMD_CHECK } lqd_command;

LQD_API const char *lqd_version(void);
/* Message of the last failing call on this thread; empty when none. */
LQD_API const char *lqd_last_error(void);
LQD_API const char *lqd_status_name(lqd_status status);
/* "off", "info" or "debug"; overrides LOEWNER_QD_LOG. */
LQD_API lqd_status lqd_set_log_level(const char *level);
LQD_API lqd_status lqd_command_from_name(const char *name, lqd_command *out);

LQD_API lqd_status lqd_job_load(const char *path, lqd_job **out);
LQD_API lqd_status lqd_job_parse(const char *json_text, lqd_job **out);
LQD_API void lqd_job_free(lqd_job *job);
LQD_API lqd_status lqd_job_set_step(lqd_job *job, double h);
LQD_API lqd_status lqd_job_set_order(lqd_job *job, int order);
LQD_API lqd_status lqd_job_set_n_subdiv(lqd_job *job, int n_subdiv);
LQD_API lqd_status lqd_job_set_check_tolerance(lqd_job *job, double tol);

/* Runs one command. A run that stops early (loop, corner) still returns LQD_OK with a result;
   see lqd_result_completed. */
LQD_API lqd_status lqd_run(const lqd_job *job, lqd_command command, lqd_result **out);
LQD_API void lqd_result_free(lqd_result *result);

LQD_API size_t lqd_result_sample_count(const lqd_result *result);
/* 1 for single-slit commands, N for multi. */
LQD_API size_t lqd_result_driver_count(const lqd_result *result);
LQD_API lqd_status lqd_result_time(const lqd_result *result, size_t sample, double *t);
LQD_API lqd_status lqd_result_xi(const lqd_result *result, size_t sample, size_t driver, double *xi);
/* Not available for multi. */
LQD_API lqd_status lqd_result_tip(const lqd_result *result, size_t sample, double *re, double *im);
LQD_API lqd_status lqd_result_residual(const lqd_result *result, size_t sample, double *residual);
LQD_API const char *lqd_result_stop_reason(const lqd_result *result);
LQD_API const char *lqd_result_message(const lqd_result *result);
/* 1 when the requested stop was reached (and a check met its tolerance). */
LQD_API int lqd_result_completed(const lqd_result *result);
/* Sup deviation between ODE and oracle for check runs, NaN otherwise. */
LQD_API double lqd_result_deviation(const lqd_result *result);

LQD_API lqd_status lqd_result_write_csv(const lqd_result *result, const char *path);
LQD_API lqd_status lqd_result_write_svg(const lqd_result *result, const char *path);

#ifdef __cplusplus
}
#endif

#endif
