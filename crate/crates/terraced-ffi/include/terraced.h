/* C interface for the terraced crate. */

#ifndef TERRACED_H
#define TERRACED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every function.
typedef enum TerracedStatus {
  TerracedStatus_Ok = 0,
  TerracedStatus_NullPointer = 1,
  TerracedStatus_InvalidArgument = 2,
  TerracedStatus_Divergent = 3,
  TerracedStatus_IoError = 4,
  TerracedStatus_ParseError = 5,
  TerracedStatus_Internal = 6,
  TerracedStatus_Panic = 7,
} TerracedStatus;

// Three-valued verdict.
typedef enum TerracedVerdict {
  TerracedVerdict_No = 0,
  TerracedVerdict_Yes = 1,
  TerracedVerdict_Undetermined = 2,
} TerracedVerdict;

// Cut-sequence status kind.
typedef enum TerracedEpslStatusKind {
  TerracedEpslStatusKind_Finite = 0,
  TerracedEpslStatusKind_InfiniteDetected = 1,
  TerracedEpslStatusKind_Undetermined = 2,
} TerracedEpslStatusKind;

// Opaque cut-sequence handle.
typedef struct TerracedEpsl TerracedEpsl;

// Opaque coefficient sequence handle.
typedef struct TerracedSeq TerracedSeq;

// Interval functional report for one natural interval.
typedef struct TerracedIntervalReport {
  uint64_t a;
  uint64_t b;
  double mu;
  double l;
  double k;
  double j;
  uint64_t argmin_c;
} TerracedIntervalReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *terraced_version(void);

// The classical Cesaro sequence `alpha_k = 1/(k+1)`.
enum TerracedStatus terraced_seq_cesaro(struct TerracedSeq **out);

// Power family `alpha_k = scale (k+1)^{-s}`, `s > 0`.
enum TerracedStatus terraced_seq_power(double s, double scale, struct TerracedSeq **out);

// Log-power family `alpha_k = scale (k+1)^{-s} ln(k+2)^{-t}`, `s > 0`,
// `t >= 0`.
enum TerracedStatus terraced_seq_log_power(double s,
                                           double scale,
                                           double t,
                                           struct TerracedSeq **out);

// Finite-support sequence from parallel real/imaginary arrays of length
// `len`.
enum TerracedStatus terraced_seq_finite(const double *re,
                                        const double *im,
                                        uintptr_t len,
                                        struct TerracedSeq **out);

// Moment sequence of the atomic measure with weights `(w_re, w_im)` at
// nodes in `[0, 1]`.
enum TerracedStatus terraced_seq_moments(const double *w_re,
                                         const double *w_im,
                                         const double *nodes,
                                         uintptr_t len,
                                         struct TerracedSeq **out);

// Loads a `#terraced-seq v1` file.
enum TerracedStatus terraced_seq_load(const char *path, struct TerracedSeq **out);

// Writes a finite-support sequence to a file.
enum TerracedStatus terraced_seq_save(const struct TerracedSeq *seq, const char *path);

// Releases a sequence handle. Passing NULL is a no-op.
//
// # Safety
// `seq` must be a pointer previously returned by one of the constructors
// and not yet freed.
void terraced_seq_free(struct TerracedSeq *seq);

// Evaluates `alpha_k`.
enum TerracedStatus terraced_seq_eval(const struct TerracedSeq *seq,
                                      uint64_t k,
                                      double *out_re,
                                      double *out_im);

// Certified enclosure of `sum_{k >= m} |alpha_k|^2`. `out_hi` may be
// infinity when no finite certificate exists.
enum TerracedStatus terraced_seq_tail_energy(const struct TerracedSeq *seq,
                                             uint64_t m,
                                             double *out_lo,
                                             double *out_hi);

// Certified operator-norm bracket and boundedness verdict. `trunc_n` is
// the section size used for the lower route (0 picks the default 2048).
enum TerracedStatus terraced_norm_bracket(const struct TerracedSeq *seq,
                                          uintptr_t trunc_n,
                                          double *out_lo,
                                          double *out_hi,
                                          enum TerracedVerdict *out_bounded);

// Certified essential-norm bracket and compactness verdict. Fails with
// `Divergent` when the sequence is certified unbounded.
enum TerracedStatus terraced_essential_norm_bracket(const struct TerracedSeq *seq,
                                                    double *out_lo,
                                                    double *out_hi,
                                                    enum TerracedVerdict *out_compact);

// Schatten-class test for `1 < q < inf` with dyadic blocks up to `k_max`.
enum TerracedStatus terraced_schatten_test(const struct TerracedSeq *seq,
                                           double q,
                                           uint32_t k_max,
                                           enum TerracedVerdict *out_verdict,
                                           double *out_lo,
                                           double *out_hi);

// Interval functionals `mu`, `L`, `K`, `J` on `[a, b]`.
enum TerracedStatus terraced_interval_report(const struct TerracedSeq *seq,
                                             uint64_t a,
                                             uint64_t b,
                                             struct TerracedIntervalReport *out);

// Builds the cut sequence for threshold `epsilon`, scanning up to `cap`.
enum TerracedStatus terraced_epsl_build(const struct TerracedSeq *seq,
                                        double epsilon,
                                        uint64_t cap,
                                        struct TerracedEpsl **out);

// Number of cut points stored (including the leading 0).
enum TerracedStatus terraced_epsl_len(const struct TerracedEpsl *epsl, uintptr_t *out);

// The `i`-th cut point.
enum TerracedStatus terraced_epsl_cut(const struct TerracedEpsl *epsl, uintptr_t i, uint64_t *out);

// Status kind plus the certified length (for `Finite` this is the proven
// final length; otherwise the number of cuts found so far).
enum TerracedStatus terraced_epsl_status(const struct TerracedEpsl *epsl,
                                         enum TerracedEpslStatusKind *out_kind,
                                         uintptr_t *out_length);

// Releases a cut-sequence handle. Passing NULL is a no-op.
//
// # Safety
// `epsl` must be a pointer previously returned by [`terraced_epsl_build`]
// and not yet freed.
void terraced_epsl_free(struct TerracedEpsl *epsl);

// Renders the full JSON criteria report for a sequence; release the
// returned string with [`terraced_string_free`].
enum TerracedStatus terraced_analyze_json(const struct TerracedSeq *seq, char **out);

// Releases a string returned by this library. Passing NULL is a no-op.
//
// # Safety
// `s` must be a pointer previously returned by [`terraced_analyze_json`]
// and not yet freed.
void terraced_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TERRACED_H */
