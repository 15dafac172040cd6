/* C API of the twdisc shared library: Tweedie / geometric Tweedie densities,
 * maximum-likelihood fitting, LRT / Kolmogorov-Smirnov model discrimination
 * and the probability-of-correct-selection simulation engine.
 *
 * Conventions: every function returns TWD_OK (0) on success or an error code
 * (TWD_EDOMAIN for parameter/usage problems, TWD_EEVAL for numerical
 * failures); results travel through out-parameters. twd_last_error() returns
 * a thread-local message for the most recent failure on the calling thread.
 * Opaque model handles are created by twd_model_new and released with
 * twd_model_free. All evaluation entry points are thread-safe; functions
 * taking a seed are deterministic for a fixed seed.
 */
#ifndef TWDISC_H
#define TWDISC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TWD_OK 0
#define TWD_EDOMAIN 2
#define TWD_EEVAL 3

#define TWD_FAMILY_TWEEDIE 0
#define TWD_FAMILY_GEOMETRIC 1

#define TWD_CRIT_LRT 0
#define TWD_CRIT_KSD 1
#define TWD_CRIT_LOGLIK 2

#define TWD_CDF_ANALYTIC 0
#define TWD_CDF_ECDF 1

/* Support kinds, ordered as in the power-regime table. */
#define TWD_SUPPORT_REAL_LINE 0
#define TWD_SUPPORT_NONNEG_INTEGERS 1
#define TWD_SUPPORT_NONNEG_REALS 2
#define TWD_SUPPORT_POSITIVE_REALS 3

typedef struct twd_model twd_model;

const char* twd_version(void);
const char* twd_last_error(void);

/* ---- model handles ---- */

int twd_model_new(int family, double p, double mean, double dispersion, twd_model** out);
void twd_model_free(twd_model* m);

/* Series truncation and quadrature knobs (optional; defaults: 1e-12 / 20000
 * terms / 64 Gauss-Laguerre nodes). */
int twd_model_set_series(twd_model* m, double rel_tol, int max_terms);
int twd_model_set_quadrature(twd_model* m, int node_count);

int twd_model_support(const twd_model* m, int* kind, int* zero_atom);

/* ---- evaluation ---- */

int twd_density(const twd_model* m, double x, double* value, int* is_atom);
int twd_log_density(const twd_model* m, double x, double* log_value, int* is_atom);
/* Monte Carlo mixture density (geometric family only). */
int twd_density_mc(const twd_model* m, double x, size_t draws, uint64_t seed, double* value,
                   int* is_atom);
int twd_cdf(const twd_model* m, double x, double* value);
int twd_quantile(const twd_model* m, double u, double* value);
int twd_zero_mass(const twd_model* m, double* value);
int twd_variation_index(const twd_model* m, double* value);
/* Fills out[0..n-1] with i.i.d. draws. */
int twd_sample(const twd_model* m, size_t n, uint64_t seed, double* out);

/* ---- divergence ---- */

int twd_kl_estimate(const twd_model* parent, const twd_model* alternative, size_t draws,
                    uint64_t seed, double* kl, double* std_error);

/* ---- inference ---- */

typedef struct twd_fit_result {
    double mean;
    double dispersion;
    double log_likelihood;
    double ksd; /* NaN when not computed */
    int converged;
    int dispersion_search_evals;
} twd_fit_result;

typedef struct twd_candidate {
    int family;
    double p;
} twd_candidate;

/* cdf_mode: TWD_CDF_ANALYTIC (quadrature CDF; ecdf_draws/seed ignored) or
 * TWD_CDF_ECDF (empirical CDF of ecdf_draws simulated points). */
int twd_fit(int family, double p, const double* data, size_t n, int compute_ksd, int cdf_mode,
            size_t ecdf_draws, uint64_t seed, twd_fit_result* out);
int twd_log_likelihood(const twd_model* m, const double* data, size_t n, double* out);
int twd_ksd(const twd_model* m, const double* data, size_t n, int cdf_mode, size_t ecdf_draws,
            uint64_t seed, double* out);

/* Fits every candidate and applies the criterion. fits[] must hold n_cand
 * entries. For TWD_CRIT_LRT exactly 2 candidates are required; statistic is
 * the Cox log-ratio (LRT), the winning KSD (KSD), or the winner's
 * log-likelihood margin (LOGLIK). */
int twd_select(const twd_candidate* candidates, size_t n_cand, const double* data, size_t n,
               int criterion, int cdf_mode, size_t ecdf_draws, uint64_t seed, int* winner,
               double* statistic, twd_fit_result* fits);

/* ---- PCS simulation ---- */

typedef struct twd_scenario {
    int parent_family;
    double parent_p;
    double parent_mean;
    double parent_dispersion;
    const twd_candidate* alternatives;
    size_t n_alternatives;
    int sample_size;
    int replicates;
    int criterion; /* TWD_CRIT_LRT, TWD_CRIT_KSD, or -1 for both */
    uint64_t master_seed;
    int workers;
    size_t ksd_draws; /* 0: use sample_size */
} twd_scenario;

typedef struct twd_pcs_result {
    double pcs_lrt; /* NaN when not requested */
    double pcs_ksd; /* NaN when not requested */
    int failures;
} twd_pcs_result;

int twd_run_scenario(const twd_scenario* scenario, twd_pcs_result* out);

/* ---- embedded datasets ---- */

/* Borrowed pointer into static storage; *n receives the length. */
int twd_dataset(const char* name, const double** values, size_t* n);

#ifdef __cplusplus
}
#endif

#endif /* TWDISC_H */
