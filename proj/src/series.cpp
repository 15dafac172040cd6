#include "twd/series.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace twd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void raise_nonconvergence(double partial, int k) {
    std::ostringstream os;
    os << "a_p series did not converge within max_terms (partial sum " << partial
       << " after k=" << k << " terms)";
    throw EvalError(os.str());
}

// sin(-k*pi*g) decomposed as sign * sin(pi*frac(k*g)) with
// sign = (-1)^(floor(k*g)+1); exact enough for k up to ~1e7.
struct OscFactor {
    double magnitude;  // sin(pi*frac) in [0,1]
    int sign;          // -1, 0, +1
};

OscFactor osc_factor(double k, double g) {
    const double y = k * g;
    const double fl = std::floor(y);
    const double fr = y - fl;
    const double s = std::sin(std::numbers::pi * fr);
    if (s == 0.0) return {0.0, 0};
    const int parity = (static_cast<long long>(fl) % 2 == 0) ? 1 : -1;
    return {s, -parity};
}

// Positive-term series for 1 < p < 2 (compound Poisson-gamma):
//   a_p(x;phi) = (1/x) sum_{k>=1} exp(k logz - lgamma(1+k) - lgamma(k tau)).
// Terms are unimodal in k; summed outward from the peak index.
double log_sum_cpg(double p, double x, double phi, const SeriesPolicy& policy) {
    const double tau = (2.0 - p) / (p - 1.0);
    const double logz = tau * std::log(x) - tau * std::log(p - 1.0) - std::log(2.0 - p) -
                        (1.0 + tau) * std::log(phi);
    const auto logterm = [&](double k) {
        return k * logz - std::lgamma(1.0 + k) - std::lgamma(k * tau);
    };
    const long long k0 =
        std::max<long long>(1, std::llround(std::pow(x, 2.0 - p) / ((2.0 - p) * phi)));
    const double g0 = logterm(static_cast<double>(k0));

    double sum = 0.0;
    int terms = 0;
    const auto side = [&](long long start, long long step) {
        int small_streak = 0;
        for (long long k = start; k >= 1; k += step) {
            if (++terms > policy.max_terms)
                raise_nonconvergence(sum * std::exp(g0), static_cast<int>(terms));
            const double g = logterm(static_cast<double>(k));
            const double t = policy.log_space ? std::exp(g - g0) : std::exp(g) / std::exp(g0);
            sum += t;
            if (g - g0 < -750.0) break;
            small_streak = (t < policy.rel_tol * sum) ? small_streak + 1 : 0;
            if (small_streak >= 3) break;
        }
    };
    side(k0, +1);
    side(k0 - 1, -1);
    return g0 + std::log(sum) - std::log(x);
}

// Alternating series shared by p>2 (positive stable) and p<0 (extreme
// stable): terms exp(k*logz + lgamma(1+gam*k) - lgamma(1+k)) modulated by
// sin(-k*pi*gam) and an optional (-1)^k. Accumulated outward from the index
// of maximal magnitude to limit cancellation.
double log_sum_oscillating(double logz, double gam, bool alternate, const SeriesPolicy& policy,
                           double* cancellation_ratio) {
    const auto logmag = [&](double k) {
        return k * logz + std::lgamma(1.0 + gam * k) - std::lgamma(1.0 + k);
    };
    // Peak of the magnitude: k^(1-gam) ~ gam^gam exp(logz).
    double kpeak = std::pow(std::pow(gam, gam) * std::exp(logz), 1.0 / (1.0 - gam));
    if (!std::isfinite(kpeak)) kpeak = static_cast<double>(policy.max_terms);
    const long long k0 = std::min<long long>(
        std::max<long long>(1, std::llround(kpeak)), policy.max_terms);
    const double g0 = logmag(static_cast<double>(k0));

    double sum = 0.0, sum_abs = 0.0;
    int terms = 0;
    bool truncated = false;
    const auto side = [&](long long start, long long step) {
        int small_streak = 0;
        for (long long k = start; k >= 1; k += step) {
            if (++terms > policy.max_terms) {
                truncated = true;
                break;
            }
            const double g = logmag(static_cast<double>(k));
            const OscFactor osc = osc_factor(static_cast<double>(k), gam);
            int sign = osc.sign;
            if (alternate && (k % 2 != 0)) sign = -sign;
            const double mag = policy.log_space ? osc.magnitude * std::exp(g - g0)
                                                : osc.magnitude * std::exp(g) / std::exp(g0);
            sum += sign * mag;
            sum_abs += mag;
            if (g - g0 < -750.0) break;
            const double denom = std::max(std::abs(sum), 1e-290);
            small_streak = (mag < policy.rel_tol * denom) ? small_streak + 1 : 0;
            if (small_streak >= 3) break;
        }
    };
    side(k0, +1);
    if (!truncated) side(k0 - 1, -1);
    if (truncated) raise_nonconvergence(sum * std::exp(g0), terms);

    *cancellation_ratio = sum_abs > 0.0 ? std::abs(sum) / sum_abs : 1.0;
    if (*cancellation_ratio < 1e-13) {
        std::ostringstream os;
        os << "a_p series lost all significant digits to cancellation (|sum|/sum|.| = "
           << *cancellation_ratio << " after " << terms << " terms)";
        throw EvalError(os.str());
    }
    if (sum < 0.0) {
        // Magnitude indistinguishable from zero once cancellation noise is
        // taken into account; a genuinely negative density cannot occur.
        if (*cancellation_ratio < 1e-9) return kNegInf;
        throw EvalError("oscillating a_p series converged to a negative value");
    }
    if (sum == 0.0) return kNegInf;
    return g0 + std::log(sum);
}

double log_a_closed_form(double p, double x, double phi) {
    if (p == 0.0) return -0.5 * std::log(2.0 * std::numbers::pi * phi) - x * x / (2.0 * phi);
    if (p == 1.0) return -std::lgamma(x + 1.0);
    if (p == 2.0)
        return -std::log(phi) / phi + (1.0 / phi - 1.0) * std::log(x) - std::lgamma(1.0 / phi);
    // p == 3
    return -0.5 * std::log(2.0 * std::numbers::pi * x * x * x * phi) - 1.0 / (2.0 * x * phi);
}

}  // namespace

void SeriesPolicy::validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-3) throw ConfigError("rel_tol must be in (0, 1e-3]");
    if (max_terms < 100) throw ConfigError("max_terms must be >= 100");
}

namespace detail {

double log_a_series(const PowerParam& pp, double x, double phi, const SeriesPolicy& policy,
                    bool force_series) {
    policy.validate();
    if (!(phi > 0.0)) throw DomainError("a_series requires phi > 0");
    const double p = pp.value();
    if (!force_series && (p == 0.0 || p == 1.0 || p == 2.0 || p == 3.0))
        return log_a_closed_form(p, x, phi);

    double cancel = 1.0;
    if (p > 1.0 && p < 2.0) {
        return log_sum_cpg(p, x, phi, policy);
    } else if (p > 2.0) {
        const double alpha = pp.alpha();  // in (0,1)
        const double logz = alpha * std::log(p - 1.0) + (alpha - 1.0) * std::log(phi) -
                            std::log(p - 2.0) - alpha * std::log(x);
        const double ls = log_sum_oscillating(logz, alpha, true, policy, &cancel);
        return ls - std::log(std::numbers::pi * x);
    } else if (p < 0.0) {
        const double alpha = pp.alpha();  // in (1,2)
        const double beta = 1.0 / alpha;
        const double logc = beta * std::log(alpha * phi) -
                            ((alpha - 1.0) * beta) * std::log(alpha - 1.0);
        const double logz = std::log(std::abs(x)) + logc;
        // (-x)^k contributes (-1)^k only on the positive half-line.
        const double ls = log_sum_oscillating(logz, beta, x > 0.0, policy, &cancel);
        return ls - std::log(std::numbers::pi * std::abs(x));
    }
    throw DomainError("no a_p series exists at this power (p=2 degenerates, p in {0,1})");
}

double saddle_log_density(double p, double x, double m, double phi) {
    if (!(x > 0.0)) return kNegInf;
    const double dev =
        2.0 * (std::pow(x, 2.0 - p) / ((1.0 - p) * (2.0 - p)) -
               x * std::pow(m, 1.0 - p) / (1.0 - p) + std::pow(m, 2.0 - p) / (2.0 - p));
    return -dev / (2.0 * phi) - 0.5 * std::log(2.0 * std::numbers::pi * phi * std::pow(x, p));
}

}  // namespace detail

double a_series(const PowerParam& pp, double x, double phi, const SeriesPolicy& policy,
                bool force_series) {
    policy.validate();
    const double p = pp.value();
    const SupportKind sk = pp.support();
    if (sk.kind == Support::PositiveReals && !(x > 0.0))
        throw DomainError("x outside the support (0,inf)");
    if (sk.kind == Support::NonNegativeReals) {
        if (x < 0.0) throw DomainError("x outside the support [0,inf)");
        if (x == 0.0) return 1.0;  // the indicator term of the 1<p<2 display
    }
    if (sk.kind == Support::NonNegativeIntegers) {
        if (x < 0.0 || x != std::floor(x)) throw DomainError("x outside the support N");
    }
    if (p < 0.0 && x == 0.0) {
        // Limit of the k=1 term of the extreme stable expansion.
        const double alpha = pp.alpha();
        const double beta = 1.0 / alpha;
        return std::pow(alpha * phi, beta) * std::tgamma(1.0 + beta) *
               std::sin(std::numbers::pi * beta) /
               (std::pow(alpha - 1.0, (alpha - 1.0) * beta) * std::numbers::pi);
    }
    return std::exp(detail::log_a_series(pp, x, phi, policy, force_series));
}

}  // namespace twd
