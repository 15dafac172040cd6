#include "twd/divergence.hpp"

#include <cmath>
#include <sstream>

namespace twd {

KlEstimate kl_estimate(const ModelSpec& parent, const ModelSpec& alternative,
                       std::size_t draw_count, std::uint64_t rng_seed,
                       const SeriesPolicy& policy, int gl_order) {
    if (parent.family != alternative.family)
        throw DomainError("kl_estimate requires both specs in the same family");
    if (!(parent.support() == alternative.support()))
        throw DomainError("kl_estimate requires matching support kinds");
    if (draw_count == 0) throw ConfigError("draw_count must be positive");

    const DensityEngine ep(parent, policy, gl_order);
    const DensityEngine ea(alternative, policy, gl_order);
    const std::vector<double> xs = ep.sample(draw_count, rng_seed);

    double sum = 0.0, sumsq = 0.0;
    std::size_t used = 0, excluded = 0;
    for (double x : xs) {
        double lr;
        try {
            const DensityValue dp = ep.density(x);
            const DensityValue da = ea.density(x);
            if (!(dp.value > 0.0) || !(da.value > 0.0) || dp.is_atom != da.is_atom) {
                ++excluded;
                continue;
            }
            lr = dp.log_value - da.log_value;
        } catch (const EvalError&) {
            ++excluded;
            continue;
        }
        sum += lr;
        sumsq += lr * lr;
        ++used;
    }
    if (excluded * 100 > draw_count) {
        std::ostringstream os;
        os << "kl_estimate excluded " << excluded << "/" << draw_count
           << " draws; supports are likely incompatible";
        throw EvalError(os.str());
    }
    const double mean = sum / static_cast<double>(used);
    double se = 0.0;
    if (used > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * sum / static_cast<double>(used)) /
                              static_cast<double>(used - 1));
        se = std::sqrt(var / static_cast<double>(used));
    }
    return {mean, se, draw_count, excluded};
}

std::vector<std::pair<double, KlEstimate>> kl_curve(const PowerParam& parent_p,
                                                    const std::vector<double>& eps_grid, double m,
                                                    double phi, std::size_t draw_count,
                                                    std::uint64_t rng_seed,
                                                    const SeriesPolicy& policy) {
    const SupportKind parent_support = parent_p.support();
    std::ostringstream offending;
    for (double eps : eps_grid) {
        if (eps < 0.0 || !(PowerParam(parent_p.value() + eps).support() == parent_support))
            offending << " " << eps;
    }
    if (!offending.str().empty())
        throw DomainError("kl_curve epsilon grid crosses the support regime at:" +
                          offending.str());

    std::vector<std::pair<double, KlEstimate>> out;
    out.reserve(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double eps = eps_grid[i];
        if (eps == 0.0) {
            out.emplace_back(0.0, KlEstimate{0.0, 0.0, draw_count, 0});
            continue;
        }
        const ModelSpec parent(Family::Tweedie, parent_p, m, phi);
        const ModelSpec alt(Family::Tweedie, PowerParam(parent_p.value() + eps), m, phi);
        out.emplace_back(eps, kl_estimate(parent, alt, draw_count, rng_seed + i, policy));
    }
    return out;
}

}  // namespace twd
