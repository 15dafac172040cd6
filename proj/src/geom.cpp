#include "twd/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "twd/rng.hpp"

namespace twd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_geometric(const ModelSpec& spec, const char* op) {
    if (spec.family != Family::GeometricTweedie)
        throw DomainError(std::string(op) + " expects a GeometricTweedie spec");
}

double logsumexp(const std::vector<double>& v) {
    double vmax = kNegInf;
    for (double x : v) vmax = std::max(vmax, x);
    if (vmax == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - vmax);
    return vmax + std::log(s);
}

struct MixtureLog {
    double log_value;
    bool is_atom;
};

MixtureLog mixture_log_density(const ModelSpec& spec, double z, const std::vector<double>& xs,
                               const std::vector<double>& log_ws, const SeriesPolicy& policy,
                               bool skip_failures, std::size_t* failures) {
    const double p = spec.power.value();
    const SupportKind sk = spec.support();
    if ((sk.kind == Support::PositiveReals && z <= 0.0) ||
        (sk.kind == Support::NonNegativeReals && z < 0.0))
        return {kNegInf, false};
    const bool atom = sk.zero_atom && z == 0.0;

    std::size_t clamped = 0;
    std::vector<double> terms;
    terms.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool clamp = false;
        const ModelSpec comp = detail::mixture_component(spec, xs[i], &clamp);
        if (clamp) ++clamped;
        try {
            terms.push_back(log_ws[i] + detail::log_density(comp, z, policy));
        } catch (const EvalError&) {
            if (!skip_failures) throw;
            ++*failures;
        }
    }
    if (clamped * 100 > xs.size())
        throw EvalError("more than 1% of mixture components clamped dispersion underflow");
    return {logsumexp(terms), atom};
}

}  // namespace

namespace detail {

ModelSpec mixture_component(const ModelSpec& spec, double x, bool* clamped) {
    const double p = spec.power.value();
    double disp = std::pow(x, 1.0 - p) * spec.dispersion;
    if (disp < std::numeric_limits<double>::min() || !std::isfinite(disp)) {
        disp = std::numeric_limits<double>::min();
        *clamped = true;
    }
    return ModelSpec(Family::Tweedie, spec.power, x * spec.mean, disp);
}

}  // namespace detail

DensityValue geom_density_gl(const ModelSpec& spec, double z, const GaussLaguerre& quad,
                             const SeriesPolicy& policy) {
    require_geometric(spec, "geom_density_gl");
    policy.validate();
    if (!std::isfinite(z)) throw DomainError("geom_density_gl requires finite z");
    if (spec.support().zero_atom && z == 0.0) {
        const double zm = geom_zero_mass(spec, quad);
        return {zm, true, std::log(zm)};
    }
    std::vector<double> log_ws(quad.order());
    for (int i = 0; i < quad.order(); ++i) log_ws[i] = std::log(quad.weights()[i]);
    std::size_t failures = 0;
    const MixtureLog ml =
        mixture_log_density(spec, z, quad.nodes(), log_ws, policy, false, &failures);
    return {std::exp(ml.log_value), ml.is_atom, ml.log_value};
}

DensityValue geom_density_mc(const ModelSpec& spec, double z, const MixtureMonteCarlo& mc,
                             const SeriesPolicy& policy) {
    require_geometric(spec, "geom_density_mc");
    policy.validate();
    if (!std::isfinite(z)) throw DomainError("geom_density_mc requires finite z");
    if (mc.draw_count == 0) throw ConfigError("draw_count must be positive");
    std::mt19937_64 eng = make_engine(mc.seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> xs(mc.draw_count);
    for (double& x : xs) x = expo(eng);
    const std::vector<double> log_ws(mc.draw_count,
                                     -std::log(static_cast<double>(mc.draw_count)));
    std::size_t failures = 0;
    const MixtureLog ml = mixture_log_density(spec, z, xs, log_ws, policy, true, &failures);
    if (failures * 100 > mc.draw_count) {
        std::ostringstream os;
        os << "geom_density_mc: " << failures << "/" << mc.draw_count << " draws failed";
        throw EvalError(os.str());
    }
    return {std::exp(ml.log_value), ml.is_atom, ml.log_value};
}

double geom_zero_mass(const ModelSpec& spec, const GaussLaguerre& quad) {
    require_geometric(spec, "geom_zero_mass");
    const double p = spec.power.value();
    if (p == 2.0) return 0.0;
    if (!(p > 1.0 && p < 2.0)) throw DomainError("geom_zero_mass requires p in (1,2]");
    const double c = std::pow(spec.mean, 2.0 - p) / ((2.0 - p) * spec.dispersion);
    return quad.integrate([&](double x) { return std::exp(-x * c); });
}

std::vector<double> geom_sample(const ModelSpec& spec, std::size_t n, std::uint64_t rng_seed,
                                const SeriesPolicy& policy) {
    require_geometric(spec, "geom_sample");
    const double p = spec.power.value();
    if (p != 0.0 && p <= 1.0)
        throw DomainError("geometric sampling supported for p=0 and p>1 only");
    std::vector<double> out(n);
    if (n == 0) return out;
    std::mt19937_64 eng = make_engine(rng_seed);
    std::exponential_distribution<double> expo(1.0);
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double x = expo(eng);
        bool clamp = false;
        const ModelSpec comp = detail::mixture_component(spec, x, &clamp);
        if (p == 0.0) {
            out[i] = comp.mean + std::sqrt(comp.dispersion) * norm(eng);
        } else if (p > 1.0 && p < 2.0) {
            const double lambda =
                std::pow(comp.mean, 2.0 - p) / ((2.0 - p) * comp.dispersion);
            std::poisson_distribution<long long> pois(lambda);
            const long long cnt = pois(eng);
            if (cnt == 0) {
                out[i] = 0.0;
            } else {
                const double tau = (2.0 - p) / (p - 1.0);
                std::gamma_distribution<double> g(
                    tau * cnt, comp.dispersion * (p - 1.0) * std::pow(comp.mean, p - 1.0));
                out[i] = g(eng);
            }
        } else if (p == 2.0) {
            std::gamma_distribution<double> g(1.0 / comp.dispersion,
                                              comp.mean * comp.dispersion);
            out[i] = g(eng);
        } else if (p == 3.0) {
            const double mu = comp.mean, lambda = 1.0 / comp.dispersion;
            const double nu = norm(eng);
            const double y = nu * nu;
            const double x1 = mu + mu * mu * y / (2.0 * lambda) -
                              mu / (2.0 * lambda) *
                                  std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
            out[i] = unif(eng) <= mu / (mu + x1) ? x1 : mu * mu / x1;
        } else {
            // Non-special p>2 components fall back to the generic Tweedie
            // inversion; one table per draw, so this path is slow.
            out[i] = sample(comp, 1, derive_seed(rng_seed, i), policy)[0];
        }
    }
    return out;
}

std::vector<double> geom_cdf_batch(const ModelSpec& spec, const std::vector<double>& sorted_z,
                                   const GaussLaguerre& quad, const SeriesPolicy& policy) {
    require_geometric(spec, "geom_cdf");
    policy.validate();
    std::vector<double> out(sorted_z.size(), 0.0);
    if (sorted_z.empty()) return out;
    for (int k = 0; k < quad.order(); ++k) {
        bool clamp = false;
        const ModelSpec comp = detail::mixture_component(spec, quad.nodes()[k], &clamp);
        const std::vector<double> F = cdf_batch(comp, sorted_z, policy);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += quad.weights()[k] * F[i];
    }
    for (double& v : out) v = std::min(v, 1.0);
    return out;
}

double geom_cdf(const ModelSpec& spec, double z, const GaussLaguerre& quad,
                const SeriesPolicy& policy) {
    return geom_cdf_batch(spec, {z}, quad, policy)[0];
}

}  // namespace twd
