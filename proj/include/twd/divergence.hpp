#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "twd/engine.hpp"

namespace twd {

struct KlEstimate {
    double value;            // nats
    double std_error;        // sample sd of the log-ratios / sqrt(draws used)
    std::size_t draw_count;  // draws requested
    std::size_t excluded;    // draws dropped (zero density / atom mismatch)
};

// Monte Carlo KL(parent || alternative): mean of log(f_parent/f_alt) over
// draws from the parent. Requires matching families and support kinds.
KlEstimate kl_estimate(const ModelSpec& parent, const ModelSpec& alternative,
                       std::size_t draw_count, std::uint64_t rng_seed,
                       const SeriesPolicy& policy = {}, int gl_order = 64);

// KL(Tw_p || Tw_{p+eps}) along an epsilon grid at fixed (m, phi). Grid points
// must stay inside the parent's support regime; per-point seeds are derived
// as seed + index.
std::vector<std::pair<double, KlEstimate>> kl_curve(const PowerParam& parent_p,
                                                    const std::vector<double>& eps_grid, double m,
                                                    double phi, std::size_t draw_count,
                                                    std::uint64_t rng_seed,
                                                    const SeriesPolicy& policy = {});

}  // namespace twd
