#include "twd/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace twd {

namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/golden ratio

void check_support(const ModelSpec& spec, const Sample& data) {
    const SupportKind sk = spec.support();
    for (std::size_t i = 0; i < data.values.size(); ++i) {
        const double y = data.values[i];
        const bool ok = sk.kind == Support::PositiveReals ? y > 0.0 : y >= 0.0;
        if (!ok) {
            std::ostringstream os;
            os << "observation " << i << " (value " << y << ") outside the support of "
               << family_name(spec.family) << " p=" << spec.power.value();
            throw DomainError(os.str());
        }
    }
}

}  // namespace

Sample::Sample(std::vector<double> v) : values(std::move(v)) {
    if (values.size() < 2) throw DomainError("a sample needs at least 2 observations");
    for (double y : values) {
        if (!std::isfinite(y)) throw DomainError("sample values must be finite");
        if (y < 0.0) throw DomainError("sample values must be non-negative");
    }
    sorted_ = values;
    std::sort(sorted_.begin(), sorted_.end());
}

double Sample::mean() const noexcept {
    double s = 0.0;
    for (double y : values) s += y;
    return s / static_cast<double>(values.size());
}

double Sample::variance() const noexcept {
    const double m = mean();
    double s = 0.0;
    for (double y : values) s += (y - m) * (y - m);
    return s / static_cast<double>(values.size() - 1);
}

double log_likelihood(const ModelSpec& spec, const Sample& data, const SeriesPolicy& policy,
                      int gl_order) {
    check_support(spec, data);
    const DensityEngine engine(spec, policy, gl_order);
    double ll = 0.0;
    for (double y : data.values) {
        // Off-support observations were rejected above; an underflowed density
        // legitimately drives the log-likelihood to -inf.
        ll += engine.density(y).log_value;
    }
    return ll;
}

double ksd(const ModelSpec& spec, const Sample& data, const CdfMode& mode,
           const SeriesPolicy& policy, int gl_order) {
    const std::vector<double>& ys = data.sorted();
    const double n = static_cast<double>(ys.size());
    std::vector<double> F;
    if (mode.kind == CdfMode::Analytic) {
        const DensityEngine engine(spec, policy, gl_order);
        F = engine.cdf_batch(ys);
    } else {
        if (mode.count == 0) throw ConfigError("EcdfFromSamples needs a positive draw count");
        const DensityEngine engine(spec, policy, gl_order);
        std::vector<double> draws = engine.sample(mode.count, mode.seed);
        std::sort(draws.begin(), draws.end());
        F.resize(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const auto it = std::upper_bound(draws.begin(), draws.end(), ys[i]);
            F[i] = static_cast<double>(it - draws.begin()) / static_cast<double>(draws.size());
        }
    }
    double d = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double hi = static_cast<double>(i + 1) / n;
        const double lo = static_cast<double>(i) / n;
        d = std::max(d, std::max(std::abs(F[i] - hi), std::abs(F[i] - lo)));
    }
    return d;
}

FitResult fit(Family family, const PowerParam& power, const Sample& data,
              const FitOptions& options) {
    if (!(power.value() > 1.0))
        throw DomainError("fitting is restricted to fixed p > 1");
    const double mhat = data.mean();
    if (!(mhat > 0.0)) throw DomainError("sample mean must be positive to fit");
    {
        // Support check up-front so zero observations fail fast for p >= 2.
        const ModelSpec probe(family, power, mhat, 1.0);
        check_support(probe, data);
    }

    int evals = 0;
    const auto loglik_at = [&](double log_phi) {
        ++evals;
        const ModelSpec spec(family, power, mhat, std::exp(log_phi));
        return log_likelihood(spec, data, options.policy, options.gl_order);
    };

    // Method-of-moments start from the variance function, bracket +-3 decades.
    const double phi0 = std::max(data.variance() / std::pow(mhat, power.value()), 1e-12);
    double lo = std::log(phi0) - std::log(1e3);
    double hi = std::log(phi0) + std::log(1e3);
    double flo = loglik_at(lo), fhi = loglik_at(hi);
    bool converged = true;

    // Golden-section needs an interior maximum; expand (doubling the span)
    // while an endpoint dominates, up to 5 times.
    double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
    double f1 = loglik_at(x1), f2 = loglik_at(x2);
    for (int expansion = 0; expansion < 5; ++expansion) {
        const double finner = std::max(f1, f2);
        if (finner >= flo && finner >= fhi) break;
        const double span = hi - lo;
        if (flo > fhi) {
            lo -= span;
            flo = loglik_at(lo);
        } else {
            hi += span;
            fhi = loglik_at(hi);
        }
        x1 = hi - kGolden * (hi - lo);
        x2 = lo + kGolden * (hi - lo);
        f1 = loglik_at(x1);
        f2 = loglik_at(x2);
        if (expansion == 4 && std::max(f1, f2) < std::max(flo, fhi)) converged = false;
    }

    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = loglik_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = loglik_at(x1);
        }
    }
    const double log_phi = f1 > f2 ? x1 : x2;
    const ModelSpec fitted(family, power, mhat, std::exp(log_phi));
    const double ll = log_likelihood(fitted, data, options.policy, options.gl_order);
    double ks = std::numeric_limits<double>::quiet_NaN();
    if (options.compute_ksd) ks = ksd(fitted, data, options.cdf_mode, options.policy, options.gl_order);
    return {fitted, ll, ks, converged, evals};
}

SelectionOutcome lrt(const FitResult& a, const FitResult& b) {
    const double stat = a.log_likelihood - b.log_likelihood;
    return {stat > 0.0 ? 0 : 1, Criterion::Lrt, stat, {a, b}};
}

SelectionOutcome select(const std::vector<Candidate>& candidates, const Sample& data,
                        Criterion criterion, const FitOptions& options) {
    if (candidates.size() < 2) throw DomainError("select needs at least 2 candidates");
    if (criterion == Criterion::Lrt && candidates.size() != 2)
        throw DomainError("the LRT criterion requires exactly 2 candidates");

    FitOptions opts = options;
    opts.compute_ksd = options.compute_ksd || criterion == Criterion::Ksd;
    std::vector<FitResult> fits;
    fits.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        FitOptions ci = opts;
        if (ci.cdf_mode.kind == CdfMode::EcdfFromSamples)
            ci.cdf_mode.seed = opts.cdf_mode.seed + i;
        try {
            fits.push_back(fit(candidates[i].family, candidates[i].power, data, ci));
        } catch (const Error& e) {
            std::ostringstream os;
            os << "candidate " << family_name(candidates[i].family) << ":"
               << candidates[i].power.value() << " failed to fit: " << e.what();
            throw EvalError(os.str());
        }
    }

    if (criterion == Criterion::Lrt) {
        SelectionOutcome out = lrt(fits[0], fits[1]);
        return out;
    }
    int winner = 0;
    if (criterion == Criterion::Ksd) {
        for (std::size_t i = 1; i < fits.size(); ++i)
            if (fits[i].ksd < fits[winner].ksd) winner = static_cast<int>(i);
        return {winner, Criterion::Ksd, fits[winner].ksd, std::move(fits)};
    }
    for (std::size_t i = 1; i < fits.size(); ++i)
        if (fits[i].log_likelihood > fits[winner].log_likelihood) winner = static_cast<int>(i);
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fits.size(); ++i)
        if (static_cast<int>(i) != winner) second = std::max(second, fits[i].log_likelihood);
    return {winner, Criterion::MaxLogLik, fits[winner].log_likelihood - second, std::move(fits)};
}

}  // namespace twd
