#include "twd/tweedie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "twd/quadrature.hpp"
#include "twd/rng.hpp"

namespace twd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_tweedie(const ModelSpec& spec, const char* op) {
    if (spec.family != Family::Tweedie)
        throw DomainError(std::string(op) + " expects a Tweedie spec (geometric ops live in geom)");
}

double poisson_log_pmf(double lambda, long long k) {
    return -lambda + k * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0);
}

// Scaled-Poisson lattice for p=1: mass on phi*N with rate m/phi.
bool lattice_index(double x, double phi, long long* k) {
    const double r = x / phi;
    const double kr = std::round(r);
    if (kr < 0.0 || std::abs(r - kr) > 1e-9 * std::max(1.0, std::abs(r))) return false;
    *k = static_cast<long long>(kr);
    return true;
}

double tilt_exponent(const ModelSpec& spec, double x) {
    return (x * theta_of_mean(spec.power, spec.mean) - kappa_of_mean(spec.power, spec.mean)) /
           spec.dispersion;
}

// Exponent s of the x^(s-1) behaviour of the continuous part at 0+;
// drives the endpoint substitution of the CDF quadrature.
double left_exponent(const ModelSpec& spec) {
    const double p = spec.power.value();
    if (p > 1.0 && p < 2.0) return (2.0 - p) / (p - 1.0);
    if (p == 2.0) return 1.0 / spec.dispersion;
    return 1.0;
}

}  // namespace

namespace detail {

double log_density(const ModelSpec& spec, double x, const SeriesPolicy& policy) {
    const double p = spec.power.value();
    const SupportKind sk = spec.support();
    if (!std::isfinite(x)) throw DomainError("density requires finite x");
    if (sk.kind == Support::PositiveReals && x <= 0.0) return kNegInf;
    if (sk.kind == Support::NonNegativeReals && x < 0.0) return kNegInf;
    if (p == 1.0) {
        long long k;
        if (!lattice_index(x, spec.dispersion, &k)) return kNegInf;
        return poisson_log_pmf(spec.mean / spec.dispersion, k);
    }
    if (sk.zero_atom && x == 0.0)
        return -std::pow(spec.mean, 2.0 - p) / ((2.0 - p) * spec.dispersion);

    const double tilt = tilt_exponent(spec, x);
    try {
        return detail::log_a_series(spec.power, x, spec.dispersion, policy, false) + tilt;
    } catch (const EvalError&) {
        SeriesPolicy retry = policy;
        retry.max_terms = policy.max_terms * 10;
        try {
            return detail::log_a_series(spec.power, x, spec.dispersion, retry, false) + tilt;
        } catch (const EvalError&) {
            if (p > 1.0) {
                // Points whose saddlepoint estimate sits far under the peak
                // carry no probability mass worth resolving.
                const double peak = detail::saddle_log_density(p, spec.mean, spec.mean,
                                                               spec.dispersion);
                if (detail::saddle_log_density(p, x, spec.mean, spec.dispersion) < peak - 35.0)
                    return kNegInf;
            }
            throw;
        }
    }
}

SupportWindow effective_window(const ModelSpec& spec, const SeriesPolicy& policy) {
    const double p = spec.power.value();
    const double m = spec.mean;
    const double phi = spec.dispersion;

    if (p <= 0.0) {
        const double sd = std::sqrt(phi * std::pow(m, p));
        double lo = m - 45.0 * sd, hi = m + 45.0 * sd;
        // Pull the edges in to where the series still has significant digits.
        const auto evaluable = [&](double x) {
            try {
                log_density(spec, x, policy);
                return true;
            } catch (const EvalError&) {
                return false;
            }
        };
        while (lo < m - sd && !evaluable(lo)) lo = m - 0.9 * (m - lo);
        while (hi > m + sd && !evaluable(hi)) hi = m + 0.9 * (hi - m);
        return {lo, hi};
    }

    const double peak = detail::saddle_log_density(p, m, m, phi);
    double hi = m;
    while (detail::saddle_log_density(p, hi, m, phi) > peak - 42.0 && hi < m * 1e9) hi *= 1.25;

    double lo = 0.0;
    if (p > 2.0) {
        lo = m;
        double last_ok = m;
        while (lo > m * 1e-9) {
            if (detail::saddle_log_density(p, lo, m, phi) < peak - 42.0) break;
            try {
                log_density(spec, lo, policy);
                last_ok = lo;
            } catch (const EvalError&) {
                lo = last_ok;  // series evaluability cliff; mass below is negligible
                break;
            }
            lo *= 0.8;
        }
    }
    return {lo, hi};
}

}  // namespace detail

DensityValue density(const ModelSpec& spec, double x, const SeriesPolicy& policy) {
    require_tweedie(spec, "density");
    policy.validate();
    const double lv = detail::log_density(spec, x, policy);
    const bool atom = (spec.support().zero_atom && x == 0.0) ||
                      (spec.power.value() == 1.0 && lv != kNegInf);
    return {std::exp(lv), atom, lv};
}

namespace {

// Integral of the continuous density over [a,b]; substitutes x=u^c on a
// panel touching 0 when the density has an x^(s-1) singularity there.
double integrate_density(const ModelSpec& spec, double a, double b, double abs_tol,
                         const SeriesPolicy& policy) {
    if (b <= a) return 0.0;
    const auto f = [&](double x) { return std::exp(detail::log_density(spec, x, policy)); };
    const double s = left_exponent(spec);
    if (a == 0.0 && s < 1.0) {
        const double c = 2.0 / s;
        const auto g = [&](double u) { return f(std::pow(u, c)) * c * std::pow(u, c - 1.0); };
        return integrate_adaptive(g, 0.0, std::pow(b, 1.0 / c), abs_tol);
    }
    return integrate_adaptive(f, a, b, abs_tol);
}

double lattice_cdf(const ModelSpec& spec, double x) {
    if (x < 0.0) return 0.0;
    const double lambda = spec.mean / spec.dispersion;
    const long long kmax = static_cast<long long>(std::floor(x / spec.dispersion + 1e-9));
    double s = 0.0;
    for (long long k = 0; k <= kmax; ++k) s += std::exp(poisson_log_pmf(lambda, k));
    return std::min(s, 1.0);
}

}  // namespace

std::vector<double> cdf_batch(const ModelSpec& spec, const std::vector<double>& sorted_x,
                              const SeriesPolicy& policy) {
    require_tweedie(spec, "cdf");
    policy.validate();
    std::vector<double> out(sorted_x.size());
    if (sorted_x.empty()) return out;
    const double p = spec.power.value();
    if (p == 1.0) {
        for (std::size_t i = 0; i < sorted_x.size(); ++i) out[i] = lattice_cdf(spec, sorted_x[i]);
        return out;
    }
    const detail::SupportWindow w = detail::effective_window(spec, policy);
    const double origin = p > 1.0 ? 0.0 : w.lo;
    double anchor = origin;
    double acc = spec.support().zero_atom ? zero_mass(spec) : 0.0;
    for (std::size_t i = 0; i < sorted_x.size(); ++i) {
        const double x = sorted_x[i];
        if (i > 0 && x < sorted_x[i - 1]) throw DomainError("cdf_batch requires ascending points");
        if (x <= origin) {
            out[i] = (p > 1.0 && x == 0.0 && spec.support().zero_atom) ? acc : (x >= origin ? acc : 0.0);
            continue;
        }
        const double upper = std::min(x, w.hi);
        if (upper > anchor) {
            acc += integrate_density(spec, anchor, upper, 1e-9, policy);
            anchor = upper;
        }
        out[i] = std::min(acc, 1.0);
    }
    return out;
}

double cdf(const ModelSpec& spec, double x, const SeriesPolicy& policy) {
    return cdf_batch(spec, {x}, policy)[0];
}

double quantile(const ModelSpec& spec, double u, const SeriesPolicy& policy) {
    require_tweedie(spec, "quantile");
    policy.validate();
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile requires u in (0,1)");
    const double p = spec.power.value();
    if (spec.support().zero_atom && u <= zero_mass(spec)) return 0.0;
    if (p == 1.0) {
        double x = 0.0;
        while (lattice_cdf(spec, x) < u) x += spec.dispersion;
        return x;
    }

    const detail::SupportWindow w = detail::effective_window(spec, policy);
    double lo = p > 1.0 ? 0.0 : w.lo;
    double flo = spec.support().zero_atom ? zero_mass(spec) : 0.0;
    double hi = w.hi;
    double fhi = flo + integrate_density(spec, lo, hi, 1e-9, policy);
    // Expansion guard from the spec: 1e3 * m * max(1,phi)^(max(1/(2-p),1)).
    const double expo = p < 2.0 ? std::max(1.0 / (2.0 - p), 1.0) : 1.0;
    const double log_cap =
        std::log(1e3 * std::abs(spec.mean)) + expo * std::log(std::max(1.0, spec.dispersion));
    while (fhi < u) {
        const double nhi = 2.0 * std::max(hi, 1e-6);
        if (std::log(nhi) > log_cap)
            throw EvalError("quantile bracket expansion exceeded its bound");
        fhi += integrate_density(spec, hi, nhi, 1e-9, policy);
        hi = nhi;
    }
    // Bisection; the running (lo, flo) pair lets each step integrate only the
    // lo-to-midpoint gap.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-10) break;
        const double fmid = flo + integrate_density(spec, lo, mid, 1e-10, policy);
        if (std::abs(fmid - u) < 1e-8) return mid;
        if (fmid < u) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

namespace {

double draw_inverse_gaussian(std::mt19937_64& eng, double mu, double lambda) {
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double nu = norm(eng);
    const double y = nu * nu;
    const double x1 = mu + mu * mu * y / (2.0 * lambda) -
                      mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    return unif(eng) <= mu / (mu + x1) ? x1 : mu * mu / x1;
}

// Monotone CDF interpolation table driving inversion sampling for the
// non-special p>2 powers.
class InversionTable {
public:
    InversionTable(const ModelSpec& spec, const SeriesPolicy& policy) {
        const detail::SupportWindow w = detail::effective_window(spec, policy);
        const int n_panels = 1500;
        xs_.reserve(n_panels + 1);
        const double split = std::min(w.hi, spec.mean * 4.0);
        const int n_lin = split < w.hi ? n_panels * 3 / 5 : n_panels;
        for (int i = 0; i <= n_lin; ++i)
            xs_.push_back(w.lo + (split - w.lo) * i / static_cast<double>(n_lin));
        if (split < w.hi) {
            const int n_log = n_panels - n_lin;
            const double r = std::log(w.hi / split);
            for (int i = 1; i <= n_log; ++i)
                xs_.push_back(split * std::exp(r * i / static_cast<double>(n_log)));
        }
        fs_.resize(xs_.size());
        Fs_.resize(xs_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i)
            fs_[i] = std::exp(detail::log_density(spec, xs_[i], policy));
        Fs_[0] = 0.0;
        for (std::size_t i = 1; i < xs_.size(); ++i)
            Fs_[i] = Fs_[i - 1] +
                     integrate_adaptive([&](double x) {
                         return std::exp(detail::log_density(spec, x, policy));
                     }, xs_[i - 1], xs_[i], 1e-12, 40);
        const double total = Fs_.back();
        if (!(total > 0.0)) throw EvalError("inversion table: zero total mass");
        for (double& F : Fs_) F /= total;
        for (double& f : fs_) f /= total;
    }

    double invert(double u) const {
        const auto it = std::lower_bound(Fs_.begin(), Fs_.end(), u);
        std::size_t j = it == Fs_.begin() ? 1 : static_cast<std::size_t>(it - Fs_.begin());
        j = std::min(j, Fs_.size() - 1);
        const double h = xs_[j] - xs_[j - 1];
        const double dF = Fs_[j] - Fs_[j - 1];
        if (dF <= 0.0) return xs_[j];
        // Monotone cubic Hermite of F on the panel, inverted by Newton.
        const double d0 = fs_[j - 1] * h / dF, d1 = fs_[j] * h / dF;
        const double target = (u - Fs_[j - 1]) / dF;
        double t = target;
        for (int k = 0; k < 20; ++k) {
            const double t2 = t * t, t3 = t2 * t;
            const double H = (3.0 * t2 - 2.0 * t3) + d0 * (t - 2.0 * t2 + t3) + d1 * (t3 - t2);
            const double dH = (6.0 * t - 6.0 * t2) + d0 * (1.0 - 4.0 * t + 3.0 * t2) +
                              d1 * (3.0 * t2 - 2.0 * t);
            if (dH <= 0.0) break;
            const double step = (H - target) / dH;
            t -= step;
            t = std::clamp(t, 0.0, 1.0);
            if (std::abs(step) < 1e-12) break;
        }
        return xs_[j - 1] + t * h;
    }

private:
    std::vector<double> xs_, fs_, Fs_;
};

}  // namespace

std::vector<double> sample(const ModelSpec& spec, std::size_t n, std::uint64_t rng_seed,
                           const SeriesPolicy& policy) {
    require_tweedie(spec, "sample");
    policy.validate();
    const double p = spec.power.value();
    if (p != 0.0 && p <= 1.0)
        throw DomainError("sampling supported for p=0 and p>1 only");
    std::vector<double> out(n);
    if (n == 0) return out;
    std::mt19937_64 eng = make_engine(rng_seed);

    if (p == 0.0) {
        std::normal_distribution<double> d(spec.mean, std::sqrt(spec.dispersion));
        for (double& v : out) v = d(eng);
    } else if (p > 1.0 && p < 2.0) {
        // Compound Poisson-gamma; lambda forced by P(X=0)=exp(-lambda).
        const double lambda =
            std::pow(spec.mean, 2.0 - p) / ((2.0 - p) * spec.dispersion);
        const double tau = (2.0 - p) / (p - 1.0);
        const double scale = spec.dispersion * (p - 1.0) * std::pow(spec.mean, p - 1.0);
        std::poisson_distribution<long long> pois(lambda);
        for (double& v : out) {
            const long long cnt = pois(eng);
            if (cnt == 0) {
                v = 0.0;
            } else {
                std::gamma_distribution<double> g(tau * cnt, scale);
                v = g(eng);
            }
        }
    } else if (p == 2.0) {
        std::gamma_distribution<double> g(1.0 / spec.dispersion, spec.mean * spec.dispersion);
        for (double& v : out) v = g(eng);
    } else if (p == 3.0) {
        for (double& v : out) v = draw_inverse_gaussian(eng, spec.mean, 1.0 / spec.dispersion);
    } else {
        // Numerical inversion. Uniforms are drawn i.i.d. and inverted in
        // sorted order so the table walk stays cache-friendly.
        const InversionTable table(spec, policy);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> us(n);
        for (double& u : us) u = unif(eng);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return us[a] < us[b]; });
        for (std::size_t i : idx) out[i] = table.invert(us[i]);
    }
    return out;
}

}  // namespace twd
