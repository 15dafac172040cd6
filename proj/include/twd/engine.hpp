#pragma once

#include <memory>

#include "twd/geom.hpp"

namespace twd {

// Family-dispatching evaluator bundling a spec with its tolerance/truncation
// policies. Geometric densities and CDFs use the deterministic quadrature
// path; the MC path is exposed separately.
class DensityEngine {
public:
    explicit DensityEngine(ModelSpec spec, SeriesPolicy policy = {}, int gl_order = 64)
        : spec_(std::move(spec)), policy_(policy) {
        if (gl_order == 64) {
            quad_ = std::shared_ptr<const GaussLaguerre>(&default_laguerre(), [](auto*) {});
        } else {
            quad_ = std::make_shared<const GaussLaguerre>(gl_order);
        }
        policy_.validate();
    }

    const ModelSpec& spec() const noexcept { return spec_; }
    const SeriesPolicy& policy() const noexcept { return policy_; }
    const GaussLaguerre& quadrature() const noexcept { return *quad_; }

    DensityValue density(double x) const {
        return spec_.family == Family::Tweedie ? twd::density(spec_, x, policy_)
                                               : geom_density_gl(spec_, x, *quad_, policy_);
    }
    double cdf(double x) const {
        return spec_.family == Family::Tweedie ? twd::cdf(spec_, x, policy_)
                                               : geom_cdf(spec_, x, *quad_, policy_);
    }
    std::vector<double> cdf_batch(const std::vector<double>& sorted_x) const {
        return spec_.family == Family::Tweedie
                   ? twd::cdf_batch(spec_, sorted_x, policy_)
                   : geom_cdf_batch(spec_, sorted_x, *quad_, policy_);
    }
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const {
        return spec_.family == Family::Tweedie ? twd::sample(spec_, n, seed, policy_)
                                               : geom_sample(spec_, n, seed, policy_);
    }

private:
    ModelSpec spec_;
    SeriesPolicy policy_;
    std::shared_ptr<const GaussLaguerre> quad_;
};

}  // namespace twd
