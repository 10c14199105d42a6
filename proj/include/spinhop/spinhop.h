/* C interface to the spintronic Hopfield network simulator.
 *
 * All functions return spinhop_status; on any non-OK status a human-readable
 * message is available from spinhop_last_error() (thread-local). Strings
 * returned through char** are heap-allocated; release them with
 * spinhop_string_free(). Objects are released with their _free() function.
 */
#ifndef SPINHOP_SPINHOP_H_
#define SPINHOP_SPINHOP_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spinhop_status {
  SPINHOP_OK = 0,
  SPINHOP_ERR_CONFIG = 1,   /* bad configuration or missing file */
  SPINHOP_ERR_PARSE = 2,    /* malformed input text (graph, image, json) */
  SPINHOP_ERR_NUMERIC = 3,  /* non-finite value escaped a solve */
  SPINHOP_ERR_INVALID = 4,  /* invalid argument or precondition */
  SPINHOP_ERR_INTERNAL = 5
} spinhop_status;

typedef struct spinhop_config spinhop_config;
typedef struct spinhop_result spinhop_result;

const char* spinhop_version(void);
const char* spinhop_last_error(void);
void spinhop_string_free(char* s);

/* Configuration: JSON schema documented in README.md. Defaults are the
 * device sizing used throughout (100 nm track, 20 nm window, 500/2000 ohm). */
spinhop_status spinhop_config_create(spinhop_config** out);
spinhop_status spinhop_config_from_json(const char* json_text, spinhop_config** out);
spinhop_status spinhop_config_load_file(const char* path, spinhop_config** out);
spinhop_status spinhop_config_apply_env(spinhop_config* cfg);
spinhop_status spinhop_config_set_seed(spinhop_config* cfg, uint64_t seed);
spinhop_status spinhop_config_to_json(const spinhop_config* cfg, char** out_json);
void spinhop_config_free(spinhop_config* cfg);

/* Axon supply voltage for an n-neuron network. mode NULL uses the config's
 * calibration; otherwise one of balanced|eq6|eq7|eq8|explicit. */
spinhop_status spinhop_calibrate_vdw(const spinhop_config* cfg, int n_neurons,
                                     const char* mode, double* out_volts);

/* Experiments. options_json schemas (unknown keys rejected):
 *  recall: {"n","patterns","trials","exhaustive","input_mode",
 *           "distortion","seed","keep_records"}
 *  sweep:  {"n_list","patterns_list","trials","input_mode","distortion","seed"}
 *  image:  {"image_files" | "images","levels","trials_per_level","seed"}
 *  maxcut: {"graph_files" | "graphs":[{"name","text"}],"best_known_file"}
 * Pass NULL or "{}" for defaults. */
spinhop_status spinhop_run_recall(const spinhop_config* cfg,
                                  const char* options_json,
                                  spinhop_result** out);
spinhop_status spinhop_run_sweep(const spinhop_config* cfg,
                                 const char* options_json,
                                 spinhop_result** out);
spinhop_status spinhop_run_image(const spinhop_config* cfg,
                                 const char* options_json,
                                 spinhop_result** out);
spinhop_status spinhop_run_maxcut(const spinhop_config* cfg,
                                  const char* options_json,
                                  spinhop_result** out);

/* Renderings of a finished run. Times ns, energies nJ, powers mW. */
spinhop_status spinhop_result_json(const spinhop_result* res, char** out);
spinhop_status spinhop_result_trials_csv(const spinhop_result* res, char** out);
/* Soma-position trace of one trial; empty string if none was kept. */
spinhop_status spinhop_result_trace_csv(const spinhop_result* res,
                                        long long trial_index, char** out);
/* Indices of trials that kept traces; count written to out_count. Free the
 * array with spinhop_string_free (it is one allocation). */
spinhop_status spinhop_result_trace_trials(const spinhop_result* res,
                                           long long** out_indices,
                                           int* out_count);
spinhop_status spinhop_result_summary(const spinhop_result* res, char** out);
void spinhop_result_free(spinhop_result* res);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPINHOP_SPINHOP_H_ */
