/* nocsim.h — C interface to the asynchronous NoC simulator core.
 *
 * A simulation handle is created from a JSON scenario configuration,
 * optionally adjusted (seed, run-until cap, trace capture), run once, and
 * then queried for its results. Handles are opaque; every returned string
 * is heap-allocated and must be released with nocsim_string_free(). A
 * handle must not be used from two threads at once, but independent handles
 * are fully isolated and may run in parallel.
 */
#ifndef NOCSIM_H
#define NOCSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NOCSIM_API __declspec(dllexport)
#else
#define NOCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nocsim_sim nocsim_sim;

typedef enum nocsim_status {
  NOCSIM_OK = 0,
  NOCSIM_ERR_CONFIG = 1,     /* configuration rejected */
  NOCSIM_ERR_RUN_FAILED = 2, /* run finished with failed transactions or
                                protocol violations */
  NOCSIM_ERR_INVALID = 3,    /* bad argument or wrong call order */
  NOCSIM_ERR_IO = 4,
  NOCSIM_ERR_INTERNAL = 5,
} nocsim_status;

/* Returns NULL on failure; a diagnostic naming the offending field is
 * written into errbuf (if given). */
NOCSIM_API nocsim_sim* nocsim_create(const char* config_json, char* errbuf, size_t errbuf_len);
NOCSIM_API nocsim_sim* nocsim_create_from_file(const char* path, char* errbuf, size_t errbuf_len);
NOCSIM_API void nocsim_destroy(nocsim_sim* sim);

/* Pre-run adjustments; NOCSIM_ERR_INVALID once the simulation has run. */
NOCSIM_API nocsim_status nocsim_override_seed(nocsim_sim* sim, uint64_t seed);
NOCSIM_API nocsim_status nocsim_override_run_until(nocsim_sim* sim, uint64_t ps);
NOCSIM_API nocsim_status nocsim_set_trace_enabled(nocsim_sim* sim, int enabled);

/* Runs the scenario to completion. NOCSIM_OK when every transaction
 * completed and no protocol violation was observed; NOCSIM_ERR_RUN_FAILED
 * otherwise (results are still available). */
NOCSIM_API nocsim_status nocsim_run(nocsim_sim* sim);

/* Result accessors; valid after nocsim_run. */
NOCSIM_API uint64_t nocsim_trace_hash(const nocsim_sim* sim);
NOCSIM_API uint64_t nocsim_failed_transactions(const nocsim_sim* sim);

/* Named counters: "transactions_issued", "transactions_completed",
 * "transactions_failed", "packets_injected", "packets_delivered",
 * "packets_dropped", "packets_discarded_malformed", "retransmits",
 * "stale_responses", "spurious_responses", "checker_violations",
 * "mean_latency_ps", "median_latency_ps", "max_latency_ps", "end_time_ps".
 * Unknown names read as 0. */
NOCSIM_API uint64_t nocsim_counter(const nocsim_sim* sim, const char* name);

/* Per-transaction CSV, "key: value" summary, and the captured trace (empty
 * unless tracing was enabled before the run). */
NOCSIM_API char* nocsim_report_csv(const nocsim_sim* sim);
NOCSIM_API char* nocsim_report_summary(const nocsim_sim* sim);
NOCSIM_API char* nocsim_trace_text(const nocsim_sim* sim);
NOCSIM_API void nocsim_string_free(char* s);

NOCSIM_API const char* nocsim_last_error(const nocsim_sim* sim);
NOCSIM_API const char* nocsim_status_name(nocsim_status status);

#ifdef __cplusplus
}
#endif

#endif /* NOCSIM_H */
