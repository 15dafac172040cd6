#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twd/engine.hpp"

namespace twd {

// Observations Y_1..Y_n. Finite, non-negative, n >= 2.
struct Sample {
    std::vector<double> values;

    explicit Sample(std::vector<double> v);

    std::size_t n() const noexcept { return values.size(); }
    double mean() const noexcept;
    double variance() const noexcept;  // unbiased
    const std::vector<double>& sorted() const noexcept { return sorted_; }

private:
    std::vector<double> sorted_;
};

struct Candidate {
    Family family;
    PowerParam power;
};

enum class Criterion { Lrt, Ksd, MaxLogLik };

// Model CDF used inside the KS distance: the quadrature CDF, or the
// empirical CDF of `count` draws from the fitted model.
struct CdfMode {
    enum Kind { Analytic, EcdfFromSamples } kind = Analytic;
    std::size_t count = 10000;
    std::uint64_t seed = 0;

    static CdfMode analytic() { return {}; }
    static CdfMode ecdf(std::size_t count, std::uint64_t seed) {
        return {EcdfFromSamples, count, seed};
    }
};

struct FitResult {
    ModelSpec spec;  // fitted mean and dispersion
    double log_likelihood;
    double ksd;  // NaN when not requested
    bool converged;
    int dispersion_search_evals;
};

struct FitOptions {
    bool compute_ksd = true;
    CdfMode cdf_mode = CdfMode::analytic();
    SeriesPolicy policy;
    int gl_order = 64;
};

// Profile MLE at fixed power: mean = sample mean (exact); dispersion by
// golden-section search on log phi over an expanding bracket.
FitResult fit(Family family, const PowerParam& power, const Sample& data,
              const FitOptions& options = {});

// Sum of log densities; atoms at 0 contribute the log atom mass.
double log_likelihood(const ModelSpec& spec, const Sample& data, const SeriesPolicy& policy = {},
                      int gl_order = 64);

struct SelectionOutcome {
    int winner_index;
    Criterion criterion;
    double statistic;  // LRT value, or minimal distance for KSD
    std::vector<FitResult> per_candidate;
};

// Cox statistic log(L_a/L_b); winner a iff positive, ties go to b.
SelectionOutcome lrt(const FitResult& a, const FitResult& b);

// sup over the data's jump points of |F(y) - Fhat(y)|.
double ksd(const ModelSpec& spec, const Sample& data, const CdfMode& mode = CdfMode::analytic(),
           const SeriesPolicy& policy = {}, int gl_order = 64);

// Fit every candidate, then apply the criterion. KSD and MaxLogLik ties break
// to the smaller index.
SelectionOutcome select(const std::vector<Candidate>& candidates, const Sample& data,
                        Criterion criterion, const FitOptions& options = {});

}  // namespace twd
