/* C interface to the occlusion benchmark toolkit.
 *
 * Every function returns an ocb_status. On failure a description of the
 * error is available from ocb_last_error() on the same thread until the next
 * call into the library. Objects are opaque handles owned by the caller and
 * released with the matching *_free function; free functions accept NULL.
 * Strings returned through char** out-parameters are released with
 * ocb_string_free.
 */
#ifndef OCCBENCH_OCCBENCH_H
#define OCCBENCH_OCCBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OCCBENCH_BUILDING_LIBRARY)
#    define OCB_API __declspec(dllexport)
#  else
#    define OCB_API __declspec(dllimport)
#  endif
#else
#  define OCB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ocb_status {
  OCB_OK = 0,
  OCB_ERR_INVALID_ARGUMENT = 1,
  OCB_ERR_IO = 2,
  OCB_ERR_FORMAT = 3,
  OCB_ERR_CONFIG = 4,
  OCB_ERR_EMPTY_INPUT = 5,
  OCB_ERR_INTERNAL = 99
} ocb_status;

OCB_API const char* ocb_version(void);
OCB_API const char* ocb_last_error(void);
OCB_API const char* ocb_status_name(ocb_status status);
OCB_API void ocb_string_free(char* s);

/* ---- images ------------------------------------------------------------ */

typedef struct ocb_image ocb_image; /* 8-bit RGBA */
typedef struct ocb_mask ocb_mask;

OCB_API ocb_status ocb_image_create(uint32_t width, uint32_t height, const uint8_t* rgba, ocb_image** out);
OCB_API ocb_status ocb_image_load_png(const char* path, ocb_image** out);
OCB_API ocb_status ocb_image_save_png(const ocb_image* image, const char* path);
OCB_API void ocb_image_free(ocb_image* image);
OCB_API ocb_status ocb_image_size(const ocb_image* image, uint32_t* width, uint32_t* height);
/* Borrowed pointer to width*height*4 bytes, valid until the image is freed. */
OCB_API ocb_status ocb_image_pixels(const ocb_image* image, const uint8_t** rgba);

/* Bit set where alpha > alpha_threshold. */
OCB_API ocb_status ocb_extract_silhouette(const ocb_image* image, uint8_t alpha_threshold, ocb_mask** out);
OCB_API void ocb_mask_free(ocb_mask* mask);
OCB_API ocb_status ocb_mask_size(const ocb_mask* mask, uint32_t* width, uint32_t* height);
OCB_API ocb_status ocb_mask_coverage(const ocb_mask* mask, double* coverage);
OCB_API ocb_status ocb_mask_get(const ocb_mask* mask, uint32_t x, uint32_t y, int* value);

/* ---- image metrics ----------------------------------------------------- */

/* Both images are composited over background_rgb before scoring. PSNR of
 * identical images is +infinity. */
OCB_API ocb_status ocb_psnr(const ocb_image* a, const ocb_image* b, const uint8_t background_rgb[3], double* out_db);
OCB_API ocb_status ocb_ssim(const ocb_image* a, const ocb_image* b, const uint8_t background_rgb[3], double* out);

/* ---- poses ------------------------------------------------------------- */

typedef struct ocb_pose {
  double azimuth_deg;
  double elevation_deg;
  double radius;
  double roll_deg;
} ocb_pose;

/* Row-major 4x4 camera-to-world transform. */
OCB_API ocb_status ocb_pose_to_matrix(const ocb_pose* pose, double out[16]);
OCB_API ocb_status ocb_matrix_to_pose(const double matrix[16], ocb_pose* out);

typedef struct ocb_viewset ocb_viewset;

/* name: "neus36", "zero123pp" or "enhanced42". */
OCB_API ocb_status ocb_viewset_create(const char* name, double reference_azimuth_deg, double radius,
                                      ocb_viewset** out);
OCB_API ocb_status ocb_viewset_from_json(const char* json, ocb_viewset** out);
OCB_API void ocb_viewset_free(ocb_viewset* set);
OCB_API ocb_status ocb_viewset_size(const ocb_viewset* set, size_t* count);
OCB_API ocb_status ocb_viewset_pose(const ocb_viewset* set, size_t index, ocb_pose* out);
OCB_API ocb_status ocb_viewset_to_json(const ocb_viewset* set, char** out_json);

/* ---- mask plans -------------------------------------------------------- */

typedef struct ocb_mask_plan_params {
  int32_t batch;            /* B */
  int32_t views_per_sample; /* T */
  int32_t feature_len;      /* L */
  double p_view;
  double row_ratio;
  double area_ratio;
  uint64_t seed;
  uint64_t epoch;
} ocb_mask_plan_params;

typedef struct ocb_mask_plan ocb_mask_plan;

/* Fills the documented defaults (B=64, T=6, L=196, 0.5, 0.25, 0.5, 0, 0). */
OCB_API void ocb_mask_plan_default_params(ocb_mask_plan_params* params);
OCB_API ocb_status ocb_mask_plan_create(const ocb_mask_plan_params* params, ocb_mask_plan** out);
OCB_API ocb_status ocb_mask_plan_from_json(const char* json, ocb_mask_plan** out);
OCB_API void ocb_mask_plan_free(ocb_mask_plan* plan);
OCB_API ocb_status ocb_mask_plan_view_masked(const ocb_mask_plan* plan, size_t row, int* value);
OCB_API ocb_status ocb_mask_plan_row_selected(const ocb_mask_plan* plan, size_t row, int* value);
OCB_API ocb_status ocb_mask_plan_feature_masked(const ocb_mask_plan* plan, size_t row, size_t position, int* value);
OCB_API ocb_status ocb_mask_plan_to_json(const ocb_mask_plan* plan, char** out_json);

/* ---- meshes ------------------------------------------------------------ */

typedef struct ocb_mesh ocb_mesh;

OCB_API ocb_status ocb_mesh_load(const char* path, ocb_mesh** out);
/* vertices: 3*vertex_count doubles; faces: 3*face_count indices. */
OCB_API ocb_status ocb_mesh_create(const double* vertices, size_t vertex_count, const uint32_t* faces,
                                   size_t face_count, ocb_mesh** out);
OCB_API void ocb_mesh_free(ocb_mesh* mesh);
OCB_API ocb_status ocb_mesh_counts(const ocb_mesh* mesh, size_t* vertices, size_t* faces);
OCB_API ocb_status ocb_mesh_normalize(const ocb_mesh* mesh, ocb_mesh** out);
OCB_API ocb_status ocb_mesh_is_watertight(const ocb_mesh* mesh, int* watertight);

/* Both meshes are sampled with n points drawn from the same key. */
OCB_API ocb_status ocb_chamfer(const ocb_mesh* a, const ocb_mesh* b, size_t n_points, uint64_t seed, int squared,
                               double* out);
/* Chamfer distance between raw point sets (3*count doubles each). */
OCB_API ocb_status ocb_chamfer_points(const double* a, size_t a_count, const double* b, size_t b_count, int squared,
                                      double* out);
OCB_API ocb_status ocb_volume_iou(const ocb_mesh* a, const ocb_mesh* b, int resolution, double* out);

/* ---- workflows --------------------------------------------------------- */

/* Runs one toolkit command. config_json is {"command": ..., "params": {...},
 * "workers": N}. run_root may be NULL; otherwise a timestamped run directory
 * is created under it. exit_code receives 0 (success), 2 (flagged rows) or 1.
 * summary, when non-NULL, receives a one-line summary (free with
 * ocb_string_free). Hard errors return a non-OK status and set exit_code=1. */
OCB_API ocb_status ocb_run(const char* config_json, const char* run_root, int* exit_code, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* OCCBENCH_OCCBENCH_H */
