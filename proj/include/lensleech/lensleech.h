/* SPDX-License-Identifier: Apache-2.0 */
/* C interface to the lensleech library. Every call returns an ll_status; on failure the
 * message is available from ll_last_error() on the same thread. Strings returned through
 * char** out-parameters are owned by the caller and released with ll_string_free. */
#ifndef LENSLEECH_H
#define LENSLEECH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LL_API __declspec(dllexport)
#else
#define LL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ll_status {
  LL_OK = 0,
  LL_ERR_DOMAIN = 1,
  LL_ERR_PARSE = 2,
  LL_ERR_IO = 3,
  LL_ERR_UNSATISFIABLE = 4,
  LL_ERR_DEGENERATE = 5,
  LL_ERR_INSUFFICIENT = 6,
  LL_ERR_NO_MATCH = 7,
  LL_ERR_SEQUENCING = 8,
  LL_ERR_INTERNAL = 9,
  LL_ERR_NULL_ARGUMENT = 10
} ll_status;

typedef enum ll_mode { LL_MODE_PER_ROTATION = 0, LL_MODE_ALL_ROTATIONS = 1 } ll_mode;

typedef struct ll_pattern ll_pattern;
typedef struct ll_lookup ll_lookup;
typedef struct ll_image ll_image;
typedef struct ll_config ll_config;
typedef struct ll_script ll_script;
typedef struct ll_analysis ll_analysis;
typedef struct ll_tracker ll_tracker;

LL_API const char* ll_version(void);
LL_API const char* ll_status_name(ll_status s);
/* Message of the last failed call on this thread; "" after a success. */
LL_API const char* ll_last_error(void);
/* The last error as {"error": {"kind", "message", ...}}. Caller frees. */
LL_API char* ll_last_error_json(void);
LL_API void ll_string_free(char* s);

/* ---- optics ---- */
LL_API ll_status ll_focal_length(double r1_mm, double refractive_index, double* out_mm);

/* ---- patterns ---- */
typedef struct ll_generate_options {
  int radius;
  int colors;
  ll_mode mode;
  uint64_t seed;
  double pitch_mm;
  const char* center_class; /* "C:RRRRRR" or NULL */
} ll_generate_options;

LL_API void ll_generate_options_init(ll_generate_options* o);
LL_API ll_status ll_pattern_generate(const ll_generate_options* o, ll_pattern** out);
LL_API ll_status ll_pattern_load(const char* path, ll_pattern** out);
LL_API ll_status ll_pattern_parse(const char* text, ll_pattern** out);
LL_API ll_status ll_pattern_save(const ll_pattern* p, const char* path);
LL_API ll_status ll_pattern_serialize(const ll_pattern* p, char** out);
LL_API void ll_pattern_free(ll_pattern* p);
LL_API ll_status ll_pattern_info(const ll_pattern* p, int* radius, int* colors, size_t* points, size_t* windows);
LL_API ll_status ll_pattern_color(const ll_pattern* p, int q, int r, int* color);
/* valid is 1 when no window collides; report_json may be NULL. */
LL_API ll_status ll_pattern_verify(const ll_pattern* p, ll_mode mode, int* valid, char** report_json);
LL_API ll_status ll_pattern_family_id(const ll_pattern* p, char** out);
LL_API ll_status ll_pattern_stencil_svg(const ll_pattern* p, int color, char** out);
LL_API ll_status ll_necklace_class_count(int colors, size_t* out);

/* ---- lookup tables ---- */
LL_API ll_status ll_lookup_build(const ll_pattern* p, ll_lookup** out);
LL_API void ll_lookup_free(ll_lookup* t);
LL_API ll_status ll_lookup_size(const ll_lookup* t, size_t* out);
LL_API ll_status ll_lookup_find(const ll_lookup* t, uint32_t code, int rotation, int* found, int* q, int* r);
LL_API ll_status ll_lookup_json(const ll_lookup* t, char** out);

/* ---- images ---- */
LL_API ll_status ll_image_load(const char* path, ll_image** out);
LL_API ll_status ll_image_save(const ll_image* img, const char* path);
LL_API ll_status ll_image_from_rgb(int width, int height, const uint8_t* rgb, ll_image** out);
LL_API ll_status ll_image_size(const ll_image* img, int* width, int* height);
LL_API const uint8_t* ll_image_data(const ll_image* img);
LL_API void ll_image_free(ll_image* img);

/* ---- pipeline configuration ---- */
LL_API ll_status ll_config_default(ll_config** out);
LL_API ll_status ll_config_load(const char* path, ll_config** out);
LL_API ll_status ll_config_parse(const char* text, const char* base_dir, ll_config** out);
LL_API void ll_config_free(ll_config* c);
LL_API ll_status ll_config_pattern_count(const ll_config* c, size_t* out);
/* Borrowed pointer, valid while c lives. */
LL_API ll_status ll_config_pattern_path(const ll_config* c, size_t index, const char** out);
LL_API ll_status ll_config_camera(const ll_config* c, int* width, int* height);

/* ---- scenario scripts and rendering ---- */
LL_API ll_status ll_script_parse(const char* text, const char* base_dir, ll_script** out);
/* kind: rest, press, push, rotate, squeeze. */
LL_API ll_status ll_script_scripted(const char* kind, uint64_t seed, ll_script** out);
LL_API void ll_script_free(ll_script* s);
LL_API ll_status ll_script_frame_count(const ll_script* s, size_t* out);
/* Borrowed; empty when the script names no pattern. */
LL_API ll_status ll_script_pattern_path(const ll_script* s, const char** out);
LL_API ll_status ll_script_serialize(const ll_script* s, char** out);
/* Renders frame `index` with the camera from c. sidecar_json may be NULL. */
LL_API ll_status ll_script_render_frame(const ll_script* s, size_t index, const ll_pattern* p, const ll_config* c,
                                        ll_image** image, char** sidecar_json);

/* ---- detection, matching, tracking ---- */
LL_API ll_status ll_detect_points(const ll_image* img, const ll_config* c, char** points_json, size_t* count);
LL_API ll_status ll_debug_overlay(const ll_image* img, const ll_config* c, ll_image** out);
/* Never fails for lack of points: the result is flagged insufficient instead. */
LL_API ll_status ll_analyze(const ll_image* img, const ll_lookup* t, const ll_config* c, ll_analysis** out);
LL_API void ll_analysis_free(ll_analysis* a);
LL_API ll_status ll_analysis_summary(const ll_analysis* a, size_t* points, size_t* matched, int* rotation,
                                     int* insufficient);
LL_API ll_status ll_analysis_json(const ll_analysis* a, char** out);
/* LL_ERR_INSUFFICIENT for an insufficient analysis. */
LL_API ll_status ll_analysis_rotation(const ll_analysis* a, double* degrees);

LL_API ll_status ll_tracker_new(const ll_config* c, ll_tracker** out);
LL_API void ll_tracker_free(ll_tracker* t);
/* Appends one JSON line per event to *events_jsonl (NULL when there are none). */
LL_API ll_status ll_tracker_step(ll_tracker* t, const ll_analysis* a, int64_t frame, char** events_jsonl,
                                 size_t* event_count);

/* Picks the pattern with the most matched points; ties go to the earlier pattern. */
LL_API ll_status ll_identify(const ll_image* img, const ll_pattern* const* patterns, size_t count, const ll_config* c,
                             size_t* index, char** family_id, char** scores_json);

/* ---- evaluation ---- */
LL_API ll_status ll_eval_rotation(const ll_pattern* p, const ll_config* c, int trials, uint64_t seed, char** csv,
                                  double* mean_error_deg);
LL_API ll_status ll_eval_illuminance(const ll_pattern* p, const ll_config* c, const double* lux, size_t levels,
                                     int trials, uint64_t seed, char** csv, double* knee_lux, int* knee_found);
LL_API ll_status ll_eval_pupil(const ll_pattern* p, const ll_config* c, const double* pupils_mm, size_t count,
                               int trials, uint64_t seed, char** csv);
LL_API ll_status ll_eval_gestures(const ll_pattern* p, const ll_config* c, int per_kind, int rest, uint64_t seed,
                                  char** csv, double* accuracy, int* rest_false_onsets);
LL_API ll_status ll_bench(const ll_pattern* p, const ll_config* c, const size_t* point_counts, size_t count,
                          int frames, uint64_t seed, char** csv);

#ifdef __cplusplus
}
#endif

#endif
