/* foleylab shared-library C API.
 *
 * All structured data crosses this boundary as UTF-8 JSON strings; audio
 * crosses as opaque clip handles. Every function that can fail returns a
 * foley_status; on failure, foley_last_error() holds a message for the
 * calling thread. Strings returned through char** outputs are owned by the
 * caller and must be released with foley_string_free().
 */
#ifndef FOLEYLAB_H
#define FOLEYLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct foley_clip foley_clip;

typedef enum foley_status {
    FOLEY_OK = 0,
    FOLEY_E_INVALID_ARGUMENT = 1,
    FOLEY_E_IO = 2,
    FOLEY_E_FORMAT = 3,
    FOLEY_E_UNSUPPORTED = 4,
    FOLEY_E_ESTIMATION = 5,
    FOLEY_E_AGENT = 6,
    FOLEY_E_INTERNAL = 7
} foley_status;

typedef enum foley_encoding { FOLEY_WAV_PCM16 = 0, FOLEY_WAV_FLOAT32 = 1 } foley_encoding;

const char* foley_version(void);
/* Message for the calling thread's most recent failure ("" if none). */
const char* foley_last_error(void);
const char* foley_status_name(foley_status status);
void foley_string_free(char* s);

/* ------------------------------------------------------------------ clips */

foley_status foley_clip_load_wav(const char* path, foley_clip** out);
/* clipped_out (optional) receives the number of samples saturated during
 * pcm16 conversion. */
foley_status foley_clip_save_wav(const foley_clip* clip, const char* path,
                                 foley_encoding encoding, int64_t* clipped_out);
foley_status foley_clip_create(int sample_rate, int channels, const float* samples,
                               size_t sample_count, foley_clip** out);
void foley_clip_free(foley_clip* clip);

int foley_clip_sample_rate(const foley_clip* clip);
int foley_clip_channels(const foley_clip* clip);
size_t foley_clip_frames(const foley_clip* clip);
/* Copies up to `count` interleaved samples into `buffer`. */
foley_status foley_clip_read(const foley_clip* clip, float* buffer, size_t count);

/* ------------------------------------------------------------- operations */

/* Mono source + trajectory JSON + room JSON -> stereo render. */
foley_status foley_render_event(const foley_clip* mono, const char* trajectory_json,
                                const char* room_json, foley_clip** out);

/* Stereo -> 6-channel FL,FR,C,LFE,SL,SR. */
foley_status foley_upmix_51(const foley_clip* stereo, foley_clip** out);

/* Onset annotation at the given video frame rate -> annotation JSON
 * {fps, events, activation}. */
foley_status foley_annotate(const foley_clip* clip, double fps, char** annotation_json_out);

/* Analyze/plan/refine/mix a session. Tracks align one-to-one with the script
 * events; offsets come from the event start times. */
foley_status foley_mix_session(const foley_clip* const* tracks, size_t n_tracks,
                               const char* script_json, const char* scene_json,
                               foley_clip** mix_out, char** plan_json_out);

/* Tree-of-thought script search with the deterministic default agents. */
foley_status foley_script_search(const char* context_json, const char* tot_config_json,
                                 uint64_t seed, char** script_json_out, char** trace_json_out);

/* Dataset regeneration from a directory of mono WAV sources. Returns a JSON
 * summary {count, manifest_path}. */
foley_status foley_dataset_build(const char* sources_dir, const char* config_json,
                                 const char* out_dir, char** summary_json_out);

/* Batch evaluation of <pred_dir>/<sample_id>.wav against a manifest. */
foley_status foley_evaluate(const char* pred_dir, const char* manifest_path,
                            char** report_json_out);

/* Full chain from one config: script -> render -> mix -> upmix. Returns a
 * JSON summary listing the files written. */
foley_status foley_pipeline_run(const char* config_json, const char* out_dir,
                                char** summary_json_out);

/* ---------------------------------------------------------------- metrics */

foley_status foley_gcc_phat_azimuth(const foley_clip* stereo, double interaural_m,
                                    double* out_deg);
foley_status foley_integrated_lufs(const foley_clip* clip, double* out_lufs);
foley_status foley_rt60(const foley_clip* clip, double* out_s);
foley_status foley_itd_of(double azimuth_deg, double interaural_m, double* out_s);

#ifdef __cplusplus
}
#endif

#endif /* FOLEYLAB_H */
