#pragma once

#include <cstdint>
#include <vector>

#include "twd/series.hpp"

namespace twd {

// Tweedie density per the composition a_p(x;phi) * exp[(x psi - K)/phi] on the
// support, 0 off-support. At x=0 with p in (1,2) the zero atom is returned
// with is_atom set; p=1 is the scaled Poisson on the lattice phi*N.
DensityValue density(const ModelSpec& spec, double x, const SeriesPolicy& policy = {});

// F(x) by adaptive composite quadrature (abs tol 1e-8), plus the zero atom
// where one exists.
double cdf(const ModelSpec& spec, double x, const SeriesPolicy& policy = {});

// One cumulative sweep for many (sorted ascending) evaluation points; equal to
// cdf() pointwise but integrates each inter-point gap once.
std::vector<double> cdf_batch(const ModelSpec& spec, const std::vector<double>& sorted_x,
                              const SeriesPolicy& policy = {});

// Smallest x with F(x) >= u, by bracket expansion + bisection.
double quantile(const ModelSpec& spec, double u, const SeriesPolicy& policy = {});

// n i.i.d. draws. p=0 Gaussian, 1<p<2 compound Poisson-gamma, p=2 gamma,
// p=3 inverse Gaussian, other p>2 by numerical inversion of the CDF.
std::vector<double> sample(const ModelSpec& spec, std::size_t n, std::uint64_t rng_seed,
                           const SeriesPolicy& policy = {});

namespace detail {
// log density with the series-retry policy applied (max_terms x10 once, then
// negligible-by-saddlepoint points report 0).
double log_density(const ModelSpec& spec, double x, const SeriesPolicy& policy);

// [x_lo, x_hi] containing all but ~exp(-42) of the continuous mass.
struct SupportWindow {
    double lo, hi;
};
SupportWindow effective_window(const ModelSpec& spec, const SeriesPolicy& policy);
}  // namespace detail

}  // namespace twd
