#pragma once

#include <cstdint>
#include <vector>

#include "twd/quadrature.hpp"
#include "twd/series.hpp"
#include "twd/tweedie.hpp"

namespace twd {

// Settings of the Eq.-style Monte Carlo mixture average over unit
// exponential draws.
struct MixtureMonteCarlo {
    std::size_t draw_count = 10000;
    std::uint64_t seed = 0;
};

// Density of Z ~ GTw_p(m~, phi~) as the exponential mixture
// integral_0^inf exp(-x) f_Tw(z; x m~, x^(1-p) phi~) dx, by Gauss-Laguerre.
DensityValue geom_density_gl(const ModelSpec& spec, double z, const GaussLaguerre& quad,
                             const SeriesPolicy& policy = {});

// Same integral approximated by averaging over draw_count exponential draws;
// deterministic given the seed. Per-draw series failures are skipped and
// counted; more than 1% failing raises an evaluation error.
DensityValue geom_density_mc(const ModelSpec& spec, double z, const MixtureMonteCarlo& mc,
                             const SeriesPolicy& policy = {});

// P(Z=0) for p in (1,2): sum_k w_k exp(-x_k m~^(2-p)/((2-p) phi~)); 0 at p=2.
double geom_zero_mass(const ModelSpec& spec, const GaussLaguerre& quad);

// Hierarchical sampler: x ~ Exp(1), then one draw of Tw_p(x m~, x^(1-p) phi~).
std::vector<double> geom_sample(const ModelSpec& spec, std::size_t n, std::uint64_t rng_seed,
                                const SeriesPolicy& policy = {});

// Mixture CDF: sum_k w_k F_Tw(z; x_k m~, x_k^(1-p) phi~).
double geom_cdf(const ModelSpec& spec, double z, const GaussLaguerre& quad,
                const SeriesPolicy& policy = {});
std::vector<double> geom_cdf_batch(const ModelSpec& spec, const std::vector<double>& sorted_z,
                                   const GaussLaguerre& quad, const SeriesPolicy& policy = {});

namespace detail {
// Tweedie spec of mixture component x; tilted dispersions that underflow are
// clamped to the smallest positive normal and reported through *clamped.
ModelSpec mixture_component(const ModelSpec& spec, double x, bool* clamped);
}  // namespace detail

}  // namespace twd
