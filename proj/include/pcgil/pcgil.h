// Copyright 2026 The pcgil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PCGIL_PCGIL_H_
#define PCGIL_PCGIL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PCGIL_BUILDING_LIBRARY)
#define PCGIL_API __attribute__((visibility("default")))
#else
#define PCGIL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcgil_status {
  PCGIL_OK = 0,
  PCGIL_ERR_INVALID_ARGUMENT = 1,
  PCGIL_ERR_CONTRACT_VIOLATION = 2,
  PCGIL_ERR_NON_FINITE = 3,
  PCGIL_ERR_BUDGET_EXCEEDED = 4,
  PCGIL_ERR_IO = 5,
  PCGIL_ERR_FORMAT = 6,
  PCGIL_ERR_INSUFFICIENT_DATA = 7,
  PCGIL_ERR_GENERATION_FAILED = 8,
  PCGIL_ERR_INTERNAL = 9
} pcgil_status;

PCGIL_API const char* pcgil_version(void);

/* Message of the last failed call on this thread ("" if none). */
PCGIL_API const char* pcgil_last_error(void);

/* Stable lower-case name of a status, e.g. "invalid_argument". */
PCGIL_API const char* pcgil_status_name(pcgil_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
PCGIL_API void pcgil_string_free(char* s);

/* ---- Environment ------------------------------------------------------ */

typedef struct pcgil_env pcgil_env;

/* level is a single-line level record, e.g.
   "pcgil-level v1 family=MultiRoom rooms=2 size=4 seed=7 t_max=40 view=7". */
PCGIL_API pcgil_status pcgil_env_create(const char* level, pcgil_env** out);
PCGIL_API void pcgil_env_destroy(pcgil_env* env);
PCGIL_API pcgil_status pcgil_env_reset(pcgil_env* env);

/* Actions: 0 left, 1 right, 2 forward, 3 pickup, 4 drop, 5 toggle, 6 done. */
PCGIL_API pcgil_status pcgil_env_step(pcgil_env* env, int action, double* reward,
                                      int* terminated, int* truncated);

/* Number of bytes in the view (view_size * view_size * 3). */
PCGIL_API pcgil_status pcgil_env_observation_size(const pcgil_env* env, size_t* size);
PCGIL_API pcgil_status pcgil_env_observation(const pcgil_env* env, uint8_t* view, size_t size,
                                             int* direction);
PCGIL_API pcgil_status pcgil_env_step_count(const pcgil_env* env, int* steps);

/* Breadth-first search from the level's start. optimal_steps is -1 when unsolvable. */
PCGIL_API pcgil_status pcgil_check_solvable(const char* level, int* solvable, int* optimal_steps);

/* ---- Datasets --------------------------------------------------------- */

typedef struct pcgil_dataset pcgil_dataset;

typedef struct pcgil_buffer_stats {
  uint64_t n_levels;
  double mean_traj_per_level;
  double mean_exp_per_traj;
  double mean_return;
  uint64_t n_trajectories;
  uint64_t n_tuples;
} pcgil_buffer_stats;

PCGIL_API pcgil_status pcgil_dataset_load(const char* path, pcgil_dataset** out);
PCGIL_API void pcgil_dataset_destroy(pcgil_dataset* dataset);
PCGIL_API pcgil_status pcgil_dataset_save(const pcgil_dataset* dataset, const char* path);
PCGIL_API pcgil_status pcgil_dataset_stats(const pcgil_dataset* dataset, pcgil_buffer_stats* out);

/* selection: "first_n", "common_with" (other required) or "explicit" (seeds required). */
PCGIL_API pcgil_status pcgil_dataset_subset(const pcgil_dataset* dataset, size_t n_levels,
                                            const char* selection, const pcgil_dataset* other,
                                            const uint64_t* seeds, size_t n_seeds,
                                            pcgil_dataset** out);

/* Trajectory-length histogram CSV (bin_lower,bin_upper,count,probability). */
PCGIL_API pcgil_status pcgil_dataset_histogram_csv(const pcgil_dataset* dataset, int bins,
                                                   const char* path);

/* ---- Experiments (JSON in, JSON out) ---------------------------------- */

/* Applies defaults and validation; returns the resolved config. */
PCGIL_API pcgil_status pcgil_config_resolve(const char* config_json, char** resolved_json);

PCGIL_API pcgil_status pcgil_collect(const char* config_json, const char* out_dir,
                                     char** result_json);
PCGIL_API pcgil_status pcgil_train(const char* config_json, const char* out_root, int jobs,
                                   char** result_json);
PCGIL_API pcgil_status pcgil_pretrain(const char* config_json, const char* out_dir,
                                      char** result_json);

/* request: {"actor": path, "task": {...}, "levels": [seeds] | "level_range": [first, count],
             "episodes": n, "greedy": bool, "seed": n} */
PCGIL_API pcgil_status pcgil_eval(const char* request_json, char** result_json);

PCGIL_API pcgil_status pcgil_report(const char* const* run_dirs, size_t n_runs,
                                    const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* PCGIL_PCGIL_H_ */
