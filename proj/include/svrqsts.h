/* svrqsts — quasi-static time-series simulator for radial feeders with
 * cascaded step voltage regulators.
 *
 * C interface of the shared library. Handles are opaque; every call
 * returns a status code and a failure message is kept per thread,
 * readable through svrqsts_last_error().
 */
#ifndef SVRQSTS_H
#define SVRQSTS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum svrqsts_status {
    SVRQSTS_OK = 0,
    SVRQSTS_ERR_CONFIG = 1,          /* bad config, unknown ids, bad values */
    SVRQSTS_ERR_NONCONVERGENCE = 2,  /* power flow failed mid-run */
    SVRQSTS_ERR_INFEASIBLE = 3,      /* pre-dispatch contract unreachable */
    SVRQSTS_ERR_TOPOLOGY = 4,        /* loop or multi-source island */
    SVRQSTS_ERR_IO = 5,              /* missing or corrupt files */
    SVRQSTS_ERR_INTERNAL = 6
} svrqsts_status;

typedef struct svrqsts_run svrqsts_run;

const char* svrqsts_version(void);

/* Message for the most recent failure on this thread; empty string when
 * the last call succeeded. The pointer stays valid until the next call. */
const char* svrqsts_last_error(void);

/* --- simulation runs ---------------------------------------------------- */

/* Builtin PR-09/PR-11 twin-feeder case with default settings. */
svrqsts_status svrqsts_run_create(svrqsts_run** out);

/* From a JSON run-config document. */
svrqsts_status svrqsts_run_create_from_file(const char* config_path, svrqsts_run** out);

void svrqsts_run_destroy(svrqsts_run* run);

/* Overrides, applied before execute. */
svrqsts_status svrqsts_run_set_preset(svrqsts_run* run, const char* preset);
svrqsts_status svrqsts_run_set_duration(svrqsts_run* run, double seconds);
svrqsts_status svrqsts_run_set_dt(svrqsts_run* run, double seconds);
svrqsts_status svrqsts_run_set_start_offset(svrqsts_run* run, double seconds);
/* "bidirectional" or "cogeneration", applied to every SVR. */
svrqsts_status svrqsts_run_set_mode(svrqsts_run* run, const char* mode);
svrqsts_status svrqsts_run_set_svrs_enabled(svrqsts_run* run, int enabled);
/* closed nonzero = close the device at t_s, zero = open it. */
svrqsts_status svrqsts_run_add_event(svrqsts_run* run, const char* device, double t_s, int closed);
svrqsts_status svrqsts_run_set_dispatch_constant(svrqsts_run* run, double export_mw);
svrqsts_status svrqsts_run_set_dispatch_file(svrqsts_run* run, const char* schedule_csv);
svrqsts_status svrqsts_run_set_dispatch_none(svrqsts_run* run);

/* Runs the QSTS and writes voltages.csv, flows.csv, taps.csv, summary.txt
 * and runmeta.json into out_dir (created if absent). */
svrqsts_status svrqsts_run_execute(svrqsts_run* run, const char* out_dir);

/* Post-execute queries; negative values mean "not available". */
long svrqsts_run_step_count(const svrqsts_run* run);
long svrqsts_run_runaway_count(const svrqsts_run* run);
long svrqsts_run_tap_operations(const svrqsts_run* run, const char* svr_id);

/* --- pre-dispatch -------------------------------------------------------- */

/* Computes the ramp-limited export schedule from a forecast CSV
 * (header time_s,demand_mw) and writes schedule.csv plus predispatch.txt
 * into out_dir. On SVRQSTS_ERR_INFEASIBLE, *achievable_out (when non-NULL)
 * receives the best achievable daily average in MW. */
svrqsts_status svrqsts_predispatch(const char* forecast_csv,
                                   double contract_mw,
                                   double margin,
                                   double ramp_mw_per_min,
                                   double p_min_mw,
                                   double p_max_mw,
                                   const char* out_dir,
                                   double* achievable_out);

/* --- reporting ----------------------------------------------------------- */

/* Re-derives the summary from the CSVs in run_dir. When out_path is
 * non-NULL the re-derived text is written there. *matches_out (when
 * non-NULL) is set to 1 if it equals the stored summary.txt byte for
 * byte, 0 otherwise. Missing or corrupt data gives SVRQSTS_ERR_IO. */
svrqsts_status svrqsts_report(const char* run_dir, const char* out_path, int* matches_out);

#ifdef __cplusplus
}
#endif

#endif /* SVRQSTS_H */
