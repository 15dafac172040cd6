// Temporary numeric validation harness (deleted before final).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "twd/datasets.hpp"
#include "twd/divergence.hpp"
#include "twd/inference.hpp"
#include "twd/pcs.hpp"

using namespace twd;

int main() {
    std::printf("== densities ==\n");
    {
        ModelSpec s(Family::Tweedie, PowerParam(2.0), 1.0, 1.0);
        std::printf("Tw2(1,1) at 1: %.6f (expect %.6f)\n", density(s, 1.0).value, std::exp(-1.0));
    }
    {
        ModelSpec s(Family::Tweedie, PowerParam(3.0), 1.0, 1.0);
        std::printf("Tw3(1,1) at 1: %.6f (expect %.6f)\n", density(s, 1.0).value,
                    1.0 / std::sqrt(2 * std::numbers::pi));
    }
    {
        ModelSpec s(Family::Tweedie, PowerParam(1.5), 1.0, 1.0);
        DensityValue d = density(s, 0.0);
        std::printf("Tw1.5(1,1) atom: %.6f (expect %.6f) is_atom=%d\n", d.value, std::exp(-2.0),
                    d.is_atom);
    }
    std::printf("a(2,2,0.5)=%.6f (expect 8)\n", a_series(PowerParam(2.0), 2.0, 0.5));
    std::printf("a(3,1,1)=%.6f (expect 0.241971)\n", a_series(PowerParam(3.0), 1.0, 1.0));
    std::printf("a(3,1,1,forced)=%.9f vs closed %.9f\n",
                a_series(PowerParam(3.0), 1.0, 1.0, {}, true),
                a_series(PowerParam(3.0), 1.0, 1.0));
    // forced series at p=3 across a grid vs closed form
    double worst = 0.0;
    for (double x = 0.01; x <= 20.0; x += 0.37) {
        for (double phi : {0.5, 1.0, 2.0}) {
            double a1 = a_series(PowerParam(3.0), x, phi, {}, true);
            double a2 = a_series(PowerParam(3.0), x, phi);
            worst = std::max(worst, std::abs(a1 - a2) / a2);
        }
    }
    std::printf("p=3 series vs closed worst rel err: %.3e\n", worst);

    std::printf("== cdf/quantile ==\n");
    {
        ModelSpec s(Family::Tweedie, PowerParam(2.0), 1.0, 1.0);
        std::printf("cdf Tw2(1,1) at ln2: %.8f (expect 0.5)\n", cdf(s, std::log(2.0)));
        std::printf("quantile Tw2(1,1) 0.5: %.8f (expect %.8f)\n", quantile(s, 0.5),
                    std::log(2.0));
    }
    {
        ModelSpec s(Family::Tweedie, PowerParam(2.5), 1.5, 1.0);
        auto t0 = std::chrono::steady_clock::now();
        double q = quantile(s, 0.9);
        double c = cdf(s, q);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("Tw2.5(1.5,1): q(0.9)=%.6f cdf(q)=%.6f  [%.0f ms]\n", q, c,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    // normalization p=2.5 and p=1.9 and p=-0.5
    for (double p : {1.2, 1.9, 2.2, 2.5}) {
        ModelSpec s(Family::Tweedie, PowerParam(p), 1.5, 2.0);
        auto t0 = std::chrono::steady_clock::now();
        auto w = detail::effective_window(s, {});
        double total = (p < 2 ? zero_mass(s) : 0.0);
        std::vector<double> pts{w.hi};
        total += cdf(s, w.hi) - (p < 2 ? zero_mass(s) : 0.0);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("normalization p=%.1f: %.8f  window [%.3g, %.3g] [%.0f ms]\n", p, total, w.lo,
                    w.hi, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    std::printf("== airplane ==\n");
    const Sample airplane{dataset("airplane").values};
    {
        auto t0 = std::chrono::steady_clock::now();
        FitResult fr = fit(Family::Tweedie, PowerParam(2.0), airplane);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("Tw2 fit: m=%.4f phi=%.6f ll=%.6f ksd=%.5f evals=%d conv=%d [%.0f ms]\n",
                    fr.spec.mean, fr.spec.dispersion, fr.log_likelihood, fr.ksd, fr.dispersion_search_evals,
                    fr.converged, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    {
        ModelSpec g(Family::GeometricTweedie, PowerParam(2.0), 59.60, 0.2380);
        auto t0 = std::chrono::steady_clock::now();
        double ll = log_likelihood(g, airplane);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("GTw2(59.60,0.2380) ll=%.4f (indep check -154.4143) [%.0f ms]\n", ll,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
        auto t2 = std::chrono::steady_clock::now();
        FitResult fr = fit(Family::GeometricTweedie, PowerParam(2.0), airplane);
        auto t3 = std::chrono::steady_clock::now();
        std::printf("GTw2 fit: phit=%.4f ll=%.4f ksd=%.5f conv=%d [%.0f ms]\n", fr.spec.dispersion,
                    fr.log_likelihood, fr.ksd, fr.converged,
                    std::chrono::duration<double, std::milli>(t3 - t2).count());
    }

    std::printf("== pumps ==\n");
    const Sample pumps{dataset("pumps").values};
    for (double p : {1.1, 1.4, 1.6, 1.9}) {
        auto t0 = std::chrono::steady_clock::now();
        FitResult fr = fit(Family::Tweedie, PowerParam(p), pumps);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("Tw%.1f fit: phi=%.4f ll=%.4f ksd=%.5f [%.0f ms]\n", p, fr.spec.dispersion,
                    fr.log_likelihood, fr.ksd,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    for (double p : {1.1, 1.2}) {
        auto t0 = std::chrono::steady_clock::now();
        FitResult fr = fit(Family::GeometricTweedie, PowerParam(p), pumps);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("GTw%.1f fit: phit=%.4f ll=%.4f ksd=%.5f [%.0f ms]\n", p, fr.spec.dispersion,
                    fr.log_likelihood, fr.ksd,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    std::printf("== sampling ==\n");
    {
        ModelSpec s(Family::Tweedie, PowerParam(2.2), 1.5, 1.0);
        auto t0 = std::chrono::steady_clock::now();
        auto v = sample(s, 1000000, 42);
        auto t1 = std::chrono::steady_clock::now();
        double m = 0, q = 0;
        for (double x : v) m += x;
        m /= v.size();
        for (double x : v) q += (x - m) * (x - m);
        q /= (v.size() - 1);
        std::printf("Tw2.2(1.5,1) 1e6: mean=%.4f (1.5) var=%.4f (%.4f) [%.0f ms]\n", m, q,
                    std::pow(1.5, 2.2), std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    {
        ModelSpec s(Family::Tweedie, PowerParam(1.5), 1.0, 1.0);
        auto v = sample(s, 1000000, 43);
        std::size_t zeros = 0;
        for (double x : v) zeros += x == 0.0;
        std::printf("Tw1.5(1,1) zero fraction: %.4f (expect 0.1353)\n",
                    static_cast<double>(zeros) / v.size());
    }

    std::printf("== KL ==\n");
    {
        auto t0 = std::chrono::steady_clock::now();
        KlEstimate k = kl_estimate(ModelSpec(Family::Tweedie, PowerParam(1.2), 1.0, 1.0),
                                   ModelSpec(Family::Tweedie, PowerParam(1.3), 1.0, 1.0), 100000, 7);
        auto t1 = std::chrono::steady_clock::now();
        std::printf("KL(1.2||1.3)=%.4f +- %.4f (expect ~0.030) [%.0f ms]\n", k.value, k.std_error,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return 0;
}
