/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C interface to the noisekws keyword-spotting library. All functions return
 * an nkws_status; on failure nkws_last_error() describes the problem for the
 * calling thread. Handles are opaque and released with their _free call. */

#ifndef NOISEKWS_NOISEKWS_H_
#define NOISEKWS_NOISEKWS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NKWS_BUILDING_LIBRARY)
#    define NKWS_API __declspec(dllexport)
#  else
#    define NKWS_API __declspec(dllimport)
#  endif
#else
#  define NKWS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nkws_status {
  NKWS_OK = 0,
  NKWS_ERR_INVALID_ARGUMENT = 1,
  NKWS_ERR_USAGE = 2,
  NKWS_ERR_UNSUPPORTED_FORMAT = 3,
  NKWS_ERR_CORRUPT_HEADER = 4,
  NKWS_ERR_CONFIG_INVALID = 5,
  NKWS_ERR_UNKNOWN_WORD = 6,
  NKWS_ERR_MISSING_LIST_FILE = 7,
  NKWS_ERR_MISSING_BACKGROUND_NOISE = 8,
  NKWS_ERR_EMPTY_CORPUS = 9,
  NKWS_ERR_SOURCE_TOO_SHORT = 10,
  NKWS_ERR_ZERO_POWER_SIGNAL = 11,
  NKWS_ERR_INSUFFICIENT_SAMPLES = 12,
  NKWS_ERR_SHAPE_MISMATCH = 13,
  NKWS_ERR_DEGENERATE_BATCH = 14,
  NKWS_ERR_IO = 15,
  NKWS_ERR_FORMAT_VERSION_MISMATCH = 16,
  NKWS_ERR_CHECKSUM_MISMATCH = 17,
  NKWS_ERR_INTERNAL = 18
} nkws_status;

#define NKWS_NUM_CLASSES 12
#define NKWS_SPEC_FRAMES 101
#define NKWS_SPEC_MELS 64

NKWS_API const char* nkws_version(void);
NKWS_API const char* nkws_status_name(nkws_status status);
/* Message of the last failure on this thread; "" if none. */
NKWS_API const char* nkws_last_error(void);
/* "Yes" ... "Silence" for 0..11, NULL otherwise. */
NKWS_API const char* nkws_class_name(int index);

/* ---- Frontend ---------------------------------------------------------- */

/* Writes the 101x64 log-mel spectrogram (row-major, frames x mels) of a mono
 * 16 kHz PCM16 WAV into out. capacity counts floats. */
NKWS_API nkws_status nkws_log_mel_from_wav(const char* wav_path, float* out, size_t capacity);
/* Same spectrogram as a binary dump: u32 rows, u32 cols, f32 LE values. */
NKWS_API nkws_status nkws_write_spectrogram(const char* wav_path, const char* out_path);

/* ---- Models ------------------------------------------------------------ */

typedef struct nkws_model nkws_model;

NKWS_API nkws_status nkws_model_load(const char* path, nkws_model** out);
NKWS_API nkws_status nkws_model_save(const nkws_model* model, const char* path);
NKWS_API void nkws_model_free(nkws_model* model);
/* Architecture and provenance as JSON. Copies at most capacity bytes
 * including the terminator; *needed receives the full size. */
NKWS_API nkws_status nkws_model_describe(const nkws_model* model, char* buf, size_t capacity,
                                         size_t* needed);
/* Classifies a WAV clip. logits may be NULL or hold NKWS_NUM_CLASSES floats. */
NKWS_API nkws_status nkws_model_classify_wav(const nkws_model* model, const char* wav_path,
                                             int* class_index, float* logits);

/* ---- Experiment sessions ----------------------------------------------- */

typedef struct nkws_session nkws_session;
typedef void (*nkws_log_fn)(const char* message, void* user);

NKWS_API nkws_status nkws_session_create(nkws_session** out);
NKWS_API void nkws_session_free(nkws_session* session);
/* Keys: "data_root", "noise_dir", "manifest", "profile" (paper|desk),
 * "seed", "config" (path to a key = value file), "arg" (appends to the
 * recorded command line), or any profile key prefixed with "config.". */
NKWS_API nkws_status nkws_session_set(nkws_session* session, const char* key, const char* value);
NKWS_API nkws_status nkws_session_set_log(nkws_session* session, nkws_log_fn fn, void* user);

/* Scans the corpus and writes its manifest. rows may be NULL. */
NKWS_API nkws_status nkws_prepare(nkws_session* session, const char* out_manifest, size_t* rows);
/* kind is "baseline" or "noise-aware"; fraction is NaN when absent. */
NKWS_API nkws_status nkws_pretrain(nkws_session* session, const char* kind, double fraction,
                                   const char* out_weights);
NKWS_API nkws_status nkws_adapt(nkws_session* session, const char* weights, const char* source,
                                int snr_db, int shots, int epochs, uint64_t seed,
                                const char* out_weights);
/* conditions: comma list of "clean", "<source>" or "<source>@<snr>". */
NKWS_API nkws_status nkws_evaluate(nkws_session* session, const char* weights,
                                   const char* conditions, const char* out_csv, size_t* rows);
/* seeds and snrs are comma lists or NULL for profile defaults; work_dir may
 * be NULL. */
NKWS_API nkws_status nkws_experiment(nkws_session* session, const char* figure_id,
                                     const char* seeds, const char* snrs, const char* work_dir,
                                     const char* out_csv, size_t* rows);

/* Writes a synthetic corpus in the Speech Commands layout under root and the
 * noise recordings under noise_dir (NULL: root/_noise_sources_). Zero counts
 * keep the defaults. */
NKWS_API nkws_status nkws_synth_corpus(const char* root, const char* noise_dir, uint64_t seed,
                                       size_t keyword_clips, size_t other_clips);

#ifdef __cplusplus
}
#endif

#endif /* NOISEKWS_NOISEKWS_H_ */
