#ifndef QPC_H
#define QPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QPC_KIND_NON_CLASSICAL 0

#define QPC_KIND_ENTANGLEMENT 1

#define QPC_KIND_COHERENCE_CREATION 2

#define QPC_KIND_COHERENCE_PRESERVATION 3

// Superposition with `h_0 = |0>`, `h_j = (|0> + |j>)/sqrt2`.
#define QPC_KIND_SUPERPOSITION 4

typedef enum QpcStatus {
  QPC_STATUS_OK = 0,
  QPC_STATUS_NULL_POINTER = 1,
  QPC_STATUS_INVALID_ARGUMENT = 2,
  QPC_STATUS_NOT_PHYSICAL = 3,
  QPC_STATUS_INFEASIBLE = 4,
  QPC_STATUS_SOLVER_FAILURE = 5,
  QPC_STATUS_BUFFER_TOO_SMALL = 6,
  QPC_STATUS_PANIC = 7,
} QpcStatus;

// Opaque process matrix.
typedef struct QpcProcess QpcProcess;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *qpc_last_error_message(void);

// Build a process from `2 * dim^4` doubles: the `dim^2 x dim^2` matrix,
// row-major, as interleaved `(re, im)` pairs. The matrix must be Hermitian
// and of unit trace within `tolerance`.
//
// # Safety
// `entries` must point to `2 * dim^4` readable doubles.
enum QpcStatus qpc_process_from_entries(size_t dim,
                                        const double *entries,
                                        double tolerance,
                                        struct QpcProcess **out);

// The Ising demonstration process at time `t` with depolarisation rate
// `gamma` on the second qubit.
//
// # Safety
// `out` must be a valid pointer.
enum QpcStatus qpc_process_demo(double t, double gamma, struct QpcProcess **out);

// # Safety
// `out` must be a valid pointer.
enum QpcStatus qpc_process_cz(struct QpcProcess **out);

// # Safety
// `out` must be a valid pointer.
enum QpcStatus qpc_process_identity(size_t dim, struct QpcProcess **out);

// `later` applied after `earlier`.
//
// # Safety
// Handles must be valid or null; `out` must be a valid pointer.
enum QpcStatus qpc_process_compose(const struct QpcProcess *later,
                                   const struct QpcProcess *earlier,
                                   struct QpcProcess **out);

// `p * a + (1 - p) * b`.
//
// # Safety
// Handles must be valid or null; `out` must be a valid pointer.
enum QpcStatus qpc_process_mix(double p,
                               const struct QpcProcess *a,
                               const struct QpcProcess *b,
                               struct QpcProcess **out);

// # Safety
// `process` must come from this library and not be freed twice.
void qpc_process_free(struct QpcProcess *process);

// Input dimension `d` of the process, or 0 for a null handle.
//
// # Safety
// `process` must be valid or null.
size_t qpc_process_dim(const struct QpcProcess *process);

// Copy the matrix into `buffer` as interleaved `(re, im)` pairs, row-major;
// `len` is the buffer length in doubles and must be at least `2 * dim^4`.
//
// # Safety
// `buffer` must point to `len` writable doubles.
enum QpcStatus qpc_process_entries(const struct QpcProcess *process, double *buffer, size_t len);

// Capability composition of `process` for one of the `QPC_KIND_*` kinds.
//
// # Safety
// `process` must be valid or null; `value` must be a valid pointer.
enum QpcStatus qpc_alpha(const struct QpcProcess *process, uint32_t kind, double *value);

// Capability robustness of `process`.
//
// # Safety
// `process` must be valid or null; `value` must be a valid pointer.
enum QpcStatus qpc_beta(const struct QpcProcess *process, uint32_t kind, double *value);

// Largest fidelity with `target` reachable by incapable processes.
//
// # Safety
// `target` must be valid or null; `value` must be a valid pointer.
enum QpcStatus qpc_fidelity_threshold(const struct QpcProcess *target,
                                      uint32_t kind,
                                      double *value);

// `tr(chi target)`.
//
// # Safety
// Handles must be valid or null; `value` must be a valid pointer.
enum QpcStatus qpc_process_fidelity(const struct QpcProcess *process,
                                    const struct QpcProcess *target,
                                    double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPC_H */
