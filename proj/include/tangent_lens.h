#ifndef TANGENT_LENS_H
#define TANGENT_LENS_H

/* C interface to the tangent-lens core. All functions returning strings
 * allocate with tl_free-compatible storage; call tl_free on every string
 * handed out. A session wraps one validated configuration plus the
 * derived self-affine system. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tl_session tl_session;

typedef enum {
  TL_OK = 0,
  TL_ERR_CONFIG = 1,       /* invalid configuration */
  TL_ERR_CHECK_FAILED = 2, /* a requested condition check failed */
  TL_ERR_RUNTIME = 3,      /* computation could not complete */
  TL_ERR_IO = 4,           /* file system problem */
  TL_ERR_ARG = 5           /* bad argument to the call itself */
} tl_status;

/* Open from a JSON configuration string / file. On failure *out stays
 * NULL and tl_last_error(NULL) describes the problem. */
tl_status tl_open(const char* config_json, tl_session** out);
tl_status tl_open_file(const char* path, tl_session** out);
void tl_close(tl_session* s);

/* Message for the most recent failing call on this session; pass NULL
 * for failures of tl_open itself. Owned by the library. */
const char* tl_last_error(const tl_session* s);

/* Override a configuration field before running: keys "seed", "k",
 * "samples", "out", "square_screen". */
tl_status tl_override(tl_session* s, const char* key, const char* value);

/* Round-tripped configuration as canonical JSON. */
tl_status tl_config_json(tl_session* s, char** json_out);

/* Derived system constants and the resolved zoom target. */
tl_status tl_system_info(tl_session* s, char** json_out);

/* Condition checks appropriate to the system (carpet set for diagonal
 * systems, projection/pinching/twisting otherwise). Returns
 * TL_ERR_CHECK_FAILED when any requested check fails; *json_out is
 * still filled in that case. */
tl_status tl_check(tl_session* s, char** json_out);

/* Monte-Carlo Lyapunov exponents; closed form included for carpets.
 * n <= 0 or trials <= 0 select defaults. */
tl_status tl_lyapunov(tl_session* s, int n, int trials, int threads, char** json_out);

/* Tangent classification across the configured scales. */
tl_status tl_tangent(tl_session* s, char** json_out);

/* Render frame_<scale>.ppm for every configured scale into out_dir and
 * write trace.csv; the CSV text is also returned. */
tl_status tl_zoom(tl_session* s, int threads, char** trace_csv_out);

void tl_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* TANGENT_LENS_H */
