#ifndef ARC_LEBESGUE_H
#define ARC_LEBESGUE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum AlStatus {
  AL_STATUS_OK = 0,
  AL_STATUS_NULL_POINTER = 1,
  AL_STATUS_INVALID_ARGUMENT = 2,
  AL_STATUS_DOMAIN = 3,
  AL_STATUS_NOT_ON_CURVE = 4,
  AL_STATUS_NO_CONVERGENCE = 5,
  AL_STATUS_DUPLICATE_NODES = 6,
  AL_STATUS_AMBIGUOUS = 7,
  AL_STATUS_INTERNAL = 99,
} AlStatus;

typedef enum AlFamilyKind {
  AL_FAMILY_KIND_CHEBYSHEV = 0,
  AL_FAMILY_KIND_EQUISPACED = 1,
  AL_FAMILY_KIND_FEJER_GAMMA0 = 2,
  AL_FAMILY_KIND_ADJUSTED_FEJER_GAMMA0 = 3,
  AL_FAMILY_KIND_FEKETE_CIRCLE = 4,
  AL_FAMILY_KIND_FEKETE_GAMMA0 = 5,
} AlFamilyKind;

typedef enum AlCurve {
  AL_CURVE_GAMMA0 = 0,
  AL_CURVE_UNIT_CIRCLE = 1,
  AL_CURVE_INTERVAL = 2,
} AlCurve;

typedef enum AlWitness {
  AL_WITNESS_LAGRANGE = 0,
  AL_WITNESS_RANDOM = 1,
  AL_WITNESS_BOTH = 2,
} AlWitness;

/*
 Opaque node family with its barycentric basis.
 */
typedef struct AlFamily AlFamily;

typedef struct AlLebesgueResult {
  double value;
  double argmax_param;
  uintptr_t samples_used;
  double refinement_gap;
} AlLebesgueResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds a generated family of degree `n` and stores a new handle in
 `*out`. Release it with [`al_family_free`].

 # Safety
 `out` must be a valid pointer to writable storage.
 */
enum AlStatus al_family_new(enum AlFamilyKind kind, uintptr_t n, struct AlFamily **out);

/*
 Builds a custom family from `len` points on `curve`.

 # Safety
 `re` and `im` must point to `len` readable doubles; `out` must be valid.
 */
enum AlStatus al_family_from_points(enum AlCurve curve,
                                    const double *re,
                                    const double *im,
                                    uintptr_t len,
                                    struct AlFamily **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `family` must be null or a handle not yet freed.
 */
void al_family_free(struct AlFamily *family);

/*
 Number of nodes, `n + 1`; zero for a null handle.

 # Safety
 `family` must be null or a live handle.
 */
uintptr_t al_family_len(const struct AlFamily *family);

/*
 Copies the node coordinates into `re` and `im`, each of capacity `len`.

 # Safety
 `family` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum AlStatus al_family_points(const struct AlFamily *family,
                               double *re,
                               double *im,
                               uintptr_t len);

/*
 Lebesgue function `Σ |ℓ_k(z)|` at `z = re + i im`.

 # Safety
 `family` must be a live handle and `out` valid.
 */
enum AlStatus al_lebesgue_function(const struct AlFamily *family,
                                   double re,
                                   double im,
                                   double *out);

/*
 Lebesgue constant on the family's curve. Zero arguments select the
 defaults (40 samples per gap, tolerance `1e-9`).

 # Safety
 `family` must be a live handle and `out` valid.
 */
enum AlStatus al_lebesgue_constant(const struct AlFamily *family,
                                   uintptr_t samples_per_gap,
                                   double refine_tol,
                                   struct AlLebesgueResult *out);

/*
 Largest modified MZ ratio over the chosen witness set.

 # Safety
 `family` must be a live handle and `out` valid.
 */
enum AlStatus al_worst_mz_ratio(const struct AlFamily *family,
                                double p,
                                enum AlWitness witness,
                                uint64_t seed,
                                double *out);

/*
 Field energy over the unit disk of unit charges at `e^{i angles[k]}`.

 # Safety
 `angles` must point to `len` doubles and `out` must be valid.
 */
enum AlStatus al_total_energy(const double *angles, uintptr_t len, double *out);

/*
 The exterior map `psi0` at `w = re + i im`, `|w| >= 1`.

 # Safety
 `out_re` and `out_im` must be valid.
 */
enum AlStatus al_psi0(double re, double im, double *out_re, double *out_im);

/*
 Copies the last error message of this thread into `buf` (NUL
 terminated, truncated to `len`). Returns the full message length
 without the terminator, or 0 when the last call succeeded.

 # Safety
 `buf` must be null or hold `len` bytes.
 */
uintptr_t al_last_error_message(char *buf, uintptr_t len);

/*
 Static description of a status code.
 */
const char *al_status_string(enum AlStatus status);

/*
 Library version as a NUL-terminated string.
 */
const char *al_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARC_LEBESGUE_H */
