#ifndef TEAMCOIL_H
#define TEAMCOIL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_OUT_OF_BOUNDS = 3,
  TC_STATUS_CORNER_SINGULARITY = 4,
  TC_STATUS_IO = 5,
  TC_STATUS_PARSE = 6,
  TC_STATUS_EVALUATOR_FAILURE = 7,
  TC_STATUS_INDEX_OUT_OF_RANGE = 8,
  TC_STATUS_PANIC = 9,
} TcStatus;

// Non-dominated designs collected by an optimization run.
typedef struct TcArchive TcArchive;

// The uniform-field benchmark with its optimizer settings.
typedef struct TcBenchmark TcBenchmark;

// Coaxial turns evaluated together.
typedef struct TcLayout TcLayout;

// One turn of rectangular cross section. Lengths in meters, current in
// amperes.
typedef struct TcTurn {
  double r_inner;
  double r_outer;
  double z_lower;
  double z_upper;
  double current;
} TcTurn;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *tc_version(void);

// Static description of a status code.
const char *tc_status_string(enum TcStatus status);

// Message of the last failed call on this thread, or null after a
// successful one. Valid until the next `tc_*` call on the same thread.
const char *tc_last_error_message(void);

// Field of a single turn at `(r, z)`, default azimuthal rule.
//
// # Safety
// `turn` must point to a valid `TcTurn`; `br` and `bz` may be null.
enum TcStatus tc_turn_field(const struct TcTurn *turn, double r, double z, double *br, double *bz);

// Layout from an array of `n` turns.
//
// # Safety
// `turns` must point to `n` valid `TcTurn`s and `out` to writable storage.
enum TcStatus tc_layout_from_turns(const struct TcTurn *turns, size_t n, struct TcLayout **out);

// The 20-turn benchmark layout decoded from 10 inner radii (m) with the
// default benchmark settings.
//
// # Safety
// `radii` must point to `n` doubles and `out` to writable storage.
enum TcStatus tc_layout_from_radii(const double *radii, size_t n, struct TcLayout **out);

// Number of turns in `layout`, 0 if null.
//
// # Safety
// `layout` must be null or a live handle.
size_t tc_layout_len(const struct TcLayout *layout);

// Summed field of all turns at `(r, z)`.
//
// # Safety
// `layout` must be a live handle; `br` and `bz` may be null.
enum TcStatus tc_layout_field(const struct TcLayout *layout,
                              double r,
                              double z,
                              double *br,
                              double *bz);

// # Safety
// `layout` must be null or a handle not freed before.
void tc_layout_free(struct TcLayout *layout);

// Benchmark with all default settings.
//
// # Safety
// `out` must point to writable storage.
enum TcStatus tc_benchmark_new(struct TcBenchmark **out);

// Benchmark and optimizer settings read from a `key = value` config file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum TcStatus tc_benchmark_from_config(const char *path, struct TcBenchmark **out);

// Objectives of one design: `f1` (T) and `f2` (m).
//
// # Safety
// `bench` must be a live handle and `radii` point to `n` doubles.
enum TcStatus tc_benchmark_evaluate(const struct TcBenchmark *bench,
                                    const double *radii,
                                    size_t n,
                                    double *f1,
                                    double *f2);

// Runs NSGA-II with the benchmark's settings. `population` and
// `generations` override the configured values when non-zero.
//
// # Safety
// `bench` must be a live handle and `out` writable.
enum TcStatus tc_optimize(const struct TcBenchmark *bench,
                          size_t population,
                          size_t generations,
                          uint64_t seed,
                          struct TcArchive **out);

// # Safety
// `bench` must be null or a handle not freed before.
void tc_benchmark_free(struct TcBenchmark *bench);

// Number of archived designs, 0 if null.
//
// # Safety
// `archive` must be null or a live handle.
size_t tc_archive_len(const struct TcArchive *archive);

// Objectives and radii of member `index`. `radii` receives the 10 genes
// and must have room for `radii_len >= 10` doubles, or be null.
//
// # Safety
// `archive` must be a live handle; output pointers may be null.
enum TcStatus tc_archive_member(const struct TcArchive *archive,
                                size_t index,
                                double *f1,
                                double *f2,
                                double *radii,
                                size_t radii_len);

// Writes the archive as CSV (`f1_tesla,f2_meters,r1..r10`).
//
// # Safety
// `archive` must be a live handle and `path` NUL-terminated.
enum TcStatus tc_archive_write_csv(const struct TcArchive *archive, const char *path);

// # Safety
// `archive` must be null or a handle not freed before.
void tc_archive_free(struct TcArchive *archive);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEAMCOIL_H */
