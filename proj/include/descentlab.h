/*
 * descentlab: descents and inverse descents of uniform random permutations.
 *
 * C interface to the shared library. All functions return a dl_status; on
 * failure dl_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Status values coincide with the
 * CLI exit codes.
 */
#ifndef DESCENTLAB_H
#define DESCENTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(DESCENTLAB_BUILDING)
#define DL_API __attribute__((visibility("default")))
#else
#define DL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dl_status {
  DL_OK = 0,
  DL_ERR_DOMAIN = 1,     /* argument outside the operation's domain */
  DL_ERR_NUMERIC = 2,    /* non-convergence, negative weight, mass drift */
  DL_ERR_SIZE_LIMIT = 3, /* size beyond a brute-force or dense-storage guard */
  DL_ERR_INTERNAL = 4
} dl_status;

typedef enum dl_quadrant { DL_PP = 0, DL_MM = 1, DL_MP = 2, DL_PM = 3 } dl_quadrant;

DL_API const char* dl_last_error(void);
DL_API const char* dl_version(void);

/* ---- exact joint law ---------------------------------------------------- */

typedef struct dl_pmf dl_pmf;

/* threads = 0 selects DESCENTLAB_THREADS or the hardware concurrency. */
DL_API dl_status dl_pmf_create(int n, unsigned threads, dl_pmf** out);
DL_API void dl_pmf_destroy(dl_pmf* pmf);
DL_API int dl_pmf_size(const dl_pmf* pmf);
DL_API dl_status dl_pmf_prob(const dl_pmf* pmf, int d, int dprime, double* out);
/* CSV `n,d,dprime,prob` into buf (including the terminating NUL). When buf is
 * NULL or too small, *needed receives the required size and DL_ERR_DOMAIN is
 * returned for a too-small buffer. */
DL_API dl_status dl_pmf_csv(const dl_pmf* pmf, char* buf, size_t size, size_t* needed);
DL_API dl_status dl_pmf_quadrant_tail(const dl_pmf* pmf, double x, double y, dl_quadrant q, double* out);
/* P(D/(n-1) >= x) */
DL_API dl_status dl_pmf_marginal_tail(const dl_pmf* pmf, double x, double* out);

/* ---- chain sampling ----------------------------------------------------- */

typedef struct dl_rng dl_rng;

DL_API dl_status dl_rng_create(uint64_t seed, dl_rng** out);
/* Stream for replica `index` of a run seeded with `seed`. */
DL_API dl_status dl_rng_create_replica(uint64_t seed, uint64_t index, dl_rng** out);
DL_API void dl_rng_destroy(dl_rng* rng);
DL_API dl_status dl_sample_final(int n, dl_rng* rng, int* d, int* dprime);

/* ---- rate functions ----------------------------------------------------- */

typedef struct dl_tilt {
  double x;
  double t_x;
  double rate;
  double sigma2;
} dl_tilt;

/* residual_tol <= 0 selects the default 1e-12. */
DL_API dl_status dl_solve_tilt(double x, double residual_tol, dl_tilt* out);
DL_API dl_status dl_rate(double x, double* out);
DL_API dl_status dl_joint_rate(double x, double y, double* out);
DL_API dl_status dl_sum_rate(double y, double* out);
DL_API dl_status dl_cgf(double t, double* value, double* d1, double* d2);

/* ---- Laplace transform -------------------------------------------------- */

typedef enum dl_laplace_method { DL_LAPLACE_CLOSED = 0, DL_LAPLACE_EXACT = 1, DL_LAPLACE_AXIS = 2 } dl_laplace_method;

/* The axis method requires s == 0. rel_tol <= 0 selects 1e-12. */
DL_API dl_status dl_laplace(int n, double t, double s, dl_laplace_method method, double rel_tol,
                            unsigned threads, double* value, double* log_value);

/* ---- sharp tail approximations ----------------------------------------- */

typedef struct dl_sldp_estimate {
  int n;
  double x;
  double y; /* NaN for the marginal estimate */
  dl_quadrant quadrant;
  double log_estimate;
  double estimate;
  double correction;
  int underflow;
} dl_sldp_estimate;

DL_API dl_status dl_sldp_joint(int n, double x, double y, dl_quadrant q, dl_sldp_estimate* out);
DL_API dl_status dl_sldp_marginal(int n, double x, dl_sldp_estimate* out);
DL_API dl_status dl_dependence_factor(double x, double y, dl_quadrant q, double* out);
DL_API dl_status dl_tail_mc(int n, double x, double y, dl_quadrant q, long reps, uint64_t seed,
                            unsigned threads, double* estimate, double* std_error);

/* ---- Monte Carlo limit statistics -------------------------------------- */

typedef struct dl_cov_estimate {
  double entries[2][2];
  double std_error[2][2];
  long reps;
} dl_cov_estimate;

typedef struct dl_path_stat {
  long n_final;
  double qsl_value;
  double lil_value;
} dl_path_stat;

DL_API dl_status dl_clt_covariance(int n, long reps, uint64_t seed, unsigned threads, dl_cov_estimate* out);
DL_API dl_status dl_fclt_cross_cov(int n, double s, double t, long reps, uint64_t seed, unsigned threads,
                                   dl_cov_estimate* out);
DL_API dl_status dl_sum_clt(int n, long reps, uint64_t seed, unsigned threads, double* value,
                            double* std_error);
DL_API dl_status dl_path_statistics(long n_final, uint64_t seed, dl_path_stat* out);

/* ---- oracle suites ------------------------------------------------------ */

/* Called once per check, in order. passed is 0 or 1. */
typedef void (*dl_check_sink)(void* ctx, const char* name, double value, double threshold, int passed);

/* max_n <= 0 selects the suite default. *all_passed is set to 1 iff every
 * check passed; the status reports only errors raised while running. */
DL_API dl_status dl_validate(const char* suite, int max_n, unsigned threads, dl_check_sink sink, void* ctx,
                             int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* DESCENTLAB_H */
