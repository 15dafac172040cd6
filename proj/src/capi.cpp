#include "twdisc.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "twd/datasets.hpp"
#include "twd/divergence.hpp"
#include "twd/inference.hpp"
#include "twd/pcs.hpp"

struct twd_model {
    twd::ModelSpec spec;
    twd::SeriesPolicy policy;
    int gl_order = 64;
};

namespace {

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int set_error(const twd::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
}

int set_error(const char* msg, int code) {
    g_last_error = msg;
    return code;
}

template <class F>
int guarded(F&& f) {
    try {
        f();
        return TWD_OK;
    } catch (const twd::Error& e) {
        return set_error(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TWD_EEVAL;
    }
}

twd::Family to_family(int family) {
    if (family == TWD_FAMILY_TWEEDIE) return twd::Family::Tweedie;
    if (family == TWD_FAMILY_GEOMETRIC) return twd::Family::GeometricTweedie;
    throw twd::DomainError("unknown family code");
}

twd::DensityEngine engine_of(const twd_model* m) {
    return twd::DensityEngine(m->spec, m->policy, m->gl_order);
}

twd::CdfMode to_cdf_mode(int mode, size_t draws, uint64_t seed) {
    if (mode == TWD_CDF_ANALYTIC) return twd::CdfMode::analytic();
    if (mode == TWD_CDF_ECDF) return twd::CdfMode::ecdf(draws, seed);
    throw twd::DomainError("unknown cdf mode");
}

twd::FitResult run_fit(int family, double p, const double* data, size_t n, int compute_ksd,
                       int cdf_mode, size_t ecdf_draws, uint64_t seed) {
    twd::Sample sample(std::vector<double>(data, data + n));
    twd::FitOptions opts;
    opts.compute_ksd = compute_ksd != 0;
    opts.cdf_mode = to_cdf_mode(cdf_mode, ecdf_draws, seed);
    return twd::fit(to_family(family), twd::PowerParam(p), sample, opts);
}

void pack_fit(const twd::FitResult& r, twd_fit_result* out) {
    out->mean = r.spec.mean;
    out->dispersion = r.spec.dispersion;
    out->log_likelihood = r.log_likelihood;
    out->ksd = r.ksd;
    out->converged = r.converged ? 1 : 0;
    out->dispersion_search_evals = r.dispersion_search_evals;
}

}  // namespace

extern "C" {

const char* twd_version(void) { return "twdisc 1.0.0"; }

const char* twd_last_error(void) { return g_last_error.c_str(); }

int twd_model_new(int family, double p, double mean, double dispersion, twd_model** out) {
    if (!out) return set_error("null out pointer", TWD_EDOMAIN);
    *out = nullptr;
    return guarded([&] {
        *out = new twd_model{twd::ModelSpec(to_family(family), twd::PowerParam(p), mean,
                                            dispersion),
                             twd::SeriesPolicy{}, 64};
    });
}

void twd_model_free(twd_model* m) { delete m; }

int twd_model_set_series(twd_model* m, double rel_tol, int max_terms) {
    if (!m) return set_error("null model", TWD_EDOMAIN);
    return guarded([&] {
        twd::SeriesPolicy p{rel_tol, max_terms, true};
        p.validate();
        m->policy = p;
    });
}

int twd_model_set_quadrature(twd_model* m, int node_count) {
    if (!m) return set_error("null model", TWD_EDOMAIN);
    return guarded([&] {
        twd::GaussLaguerre probe(node_count);  // validates the order
        m->gl_order = node_count;
    });
}

int twd_model_support(const twd_model* m, int* kind, int* zero_atom) {
    if (!m || !kind || !zero_atom) return set_error("null argument", TWD_EDOMAIN);
    const twd::SupportKind sk = m->spec.support();
    *kind = static_cast<int>(sk.kind);
    *zero_atom = sk.zero_atom ? 1 : 0;
    return TWD_OK;
}

int twd_density(const twd_model* m, double x, double* value, int* is_atom) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const twd::DensityValue d = engine_of(m).density(x);
        *value = d.value;
        if (is_atom) *is_atom = d.is_atom ? 1 : 0;
    });
}

int twd_log_density(const twd_model* m, double x, double* log_value, int* is_atom) {
    if (!m || !log_value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const twd::DensityValue d = engine_of(m).density(x);
        *log_value = d.log_value;
        if (is_atom) *is_atom = d.is_atom ? 1 : 0;
    });
}

int twd_density_mc(const twd_model* m, double x, size_t draws, uint64_t seed, double* value,
                   int* is_atom) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const twd::DensityValue d =
            twd::geom_density_mc(m->spec, x, twd::MixtureMonteCarlo{draws, seed}, m->policy);
        *value = d.value;
        if (is_atom) *is_atom = d.is_atom ? 1 : 0;
    });
}

int twd_cdf(const twd_model* m, double x, double* value) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] { *value = engine_of(m).cdf(x); });
}

int twd_quantile(const twd_model* m, double u, double* value) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        if (m->spec.family != twd::Family::Tweedie)
            throw twd::DomainError("quantile is implemented for the Tweedie family");
        *value = twd::quantile(m->spec, u, m->policy);
    });
}

int twd_zero_mass(const twd_model* m, double* value) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] { *value = twd::zero_mass(m->spec); });
}

int twd_variation_index(const twd_model* m, double* value) {
    if (!m || !value) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] { *value = twd::variation_index(m->spec); });
}

int twd_sample(const twd_model* m, size_t n, uint64_t seed, double* out) {
    if (!m || (!out && n > 0)) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const std::vector<double> v = engine_of(m).sample(n, seed);
        std::memcpy(out, v.data(), n * sizeof(double));
    });
}

int twd_kl_estimate(const twd_model* parent, const twd_model* alternative, size_t draws,
                    uint64_t seed, double* kl, double* std_error) {
    if (!parent || !alternative || !kl) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const twd::KlEstimate e =
            twd::kl_estimate(parent->spec, alternative->spec, draws, seed, parent->policy,
                             parent->gl_order);
        *kl = e.value;
        if (std_error) *std_error = e.std_error;
    });
}

int twd_fit(int family, double p, const double* data, size_t n, int compute_ksd, int cdf_mode,
            size_t ecdf_draws, uint64_t seed, twd_fit_result* out) {
    if (!data || !out) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        pack_fit(run_fit(family, p, data, n, compute_ksd, cdf_mode, ecdf_draws, seed), out);
    });
}

int twd_log_likelihood(const twd_model* m, const double* data, size_t n, double* out) {
    if (!m || !data || !out) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        twd::Sample sample(std::vector<double>(data, data + n));
        *out = twd::log_likelihood(m->spec, sample, m->policy, m->gl_order);
    });
}

int twd_ksd(const twd_model* m, const double* data, size_t n, int cdf_mode, size_t ecdf_draws,
            uint64_t seed, double* out) {
    if (!m || !data || !out) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        twd::Sample sample(std::vector<double>(data, data + n));
        *out = twd::ksd(m->spec, sample, to_cdf_mode(cdf_mode, ecdf_draws, seed), m->policy,
                        m->gl_order);
    });
}

int twd_select(const twd_candidate* candidates, size_t n_cand, const double* data, size_t n,
               int criterion, int cdf_mode, size_t ecdf_draws, uint64_t seed, int* winner,
               double* statistic, twd_fit_result* fits) {
    if (!candidates || !data || !winner) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        std::vector<twd::Candidate> cands;
        cands.reserve(n_cand);
        for (size_t i = 0; i < n_cand; ++i)
            cands.push_back({to_family(candidates[i].family), twd::PowerParam(candidates[i].p)});
        twd::Criterion crit;
        switch (criterion) {
            case TWD_CRIT_LRT: crit = twd::Criterion::Lrt; break;
            case TWD_CRIT_KSD: crit = twd::Criterion::Ksd; break;
            case TWD_CRIT_LOGLIK: crit = twd::Criterion::MaxLogLik; break;
            default: throw twd::DomainError("unknown criterion code");
        }
        twd::Sample sample(std::vector<double>(data, data + n));
        twd::FitOptions opts;
        opts.compute_ksd = true;
        opts.cdf_mode = to_cdf_mode(cdf_mode, ecdf_draws, seed);
        const twd::SelectionOutcome out = twd::select(cands, sample, crit, opts);
        *winner = out.winner_index;
        if (statistic) *statistic = out.statistic;
        if (fits)
            for (size_t i = 0; i < out.per_candidate.size() && i < n_cand; ++i)
                pack_fit(out.per_candidate[i], &fits[i]);
    });
}

int twd_run_scenario(const twd_scenario* sc, twd_pcs_result* out) {
    if (!sc || !out) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        twd::Scenario s{twd::ModelSpec(to_family(sc->parent_family),
                                       twd::PowerParam(sc->parent_p), sc->parent_mean,
                                       sc->parent_dispersion),
                        {},
                        sc->sample_size,
                        sc->replicates,
                        twd::PcsCriterion::Both,
                        sc->master_seed,
                        sc->workers > 0 ? sc->workers : 1,
                        sc->ksd_draws};
        for (size_t i = 0; i < sc->n_alternatives; ++i)
            s.alternatives.push_back({to_family(sc->alternatives[i].family),
                                      twd::PowerParam(sc->alternatives[i].p)});
        if (sc->criterion == TWD_CRIT_LRT) s.criterion = twd::PcsCriterion::Lrt;
        else if (sc->criterion == TWD_CRIT_KSD) s.criterion = twd::PcsCriterion::Ksd;
        const twd::PcsRow row = twd::run_scenario(s);
        if (!row.error.empty()) throw twd::EvalError(row.error);
        out->pcs_lrt = row.pcs_lrt ? *row.pcs_lrt : kNaN;
        out->pcs_ksd = row.pcs_ksd ? *row.pcs_ksd : kNaN;
        out->failures = row.failures;
    });
}

int twd_dataset(const char* name, const double** values, size_t* n) {
    if (!name || !values || !n) return set_error("null argument", TWD_EDOMAIN);
    return guarded([&] {
        const twd::Dataset& d = twd::dataset(name);
        *values = d.values.data();
        *n = d.values.size();
    });
}

}  // extern "C"
