#include "twd/model.hpp"

#include <cmath>
#include <sstream>

#include "twd/geom.hpp"
#include "twd/quadrature.hpp"

namespace twd {

PowerParam::PowerParam(double p) : p_(p) {
    if (std::isnan(p) || (p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "power p=" << p << " outside the admissible set (-inf,0] U [1,inf)";
        throw DomainError(os.str());
    }
}

double PowerParam::alpha() const {
    if (!has_alpha()) throw DomainError("stability index undefined at p=1");
    return (2.0 - p_) / (1.0 - p_);
}

SupportKind PowerParam::support() const noexcept {
    if (p_ <= 0.0) return {Support::RealLine, false};
    if (p_ == 1.0) return {Support::NonNegativeIntegers, false};
    if (p_ < 2.0) return {Support::NonNegativeReals, true};
    return {Support::PositiveReals, false};
}

ModelSpec::ModelSpec(Family family, PowerParam power, double mean, double dispersion)
    : family(family), power(power), mean(mean), dispersion(dispersion) {
    if (!(dispersion > 0.0) || !std::isfinite(dispersion))
        throw DomainError("dispersion must be positive and finite");
    if (!std::isfinite(mean)) throw DomainError("mean must be finite");
    // Mean domain is (0,inf) for every supported power except p=0 (whole line).
    if (power.value() != 0.0 && !(mean > 0.0)) throw DomainError("mean must be positive");
}

std::string family_name(Family f) {
    return f == Family::Tweedie ? "tw" : "gtw";
}

double theta_of_mean(const PowerParam& p, double m) {
    if (!(m > 0.0)) throw DomainError("theta_of_mean requires m > 0");
    if (p.value() == 1.0) return std::log(m);
    return std::pow(m, 1.0 - p.value()) / (1.0 - p.value());
}

double kappa_of_mean(const PowerParam& p, double m) {
    if (!(m > 0.0)) throw DomainError("kappa_of_mean requires m > 0");
    if (p.value() == 2.0) return std::log(m);
    return std::pow(m, 2.0 - p.value()) / (2.0 - p.value());
}

double zero_mass(const ModelSpec& spec) {
    const double p = spec.power.value();
    if (p <= 1.0) throw DomainError("zero_mass defined for p > 1 only");
    if (spec.family == Family::GeometricTweedie) {
        if (p >= 2.0) return 0.0;
        return geom_zero_mass(spec, default_laguerre());
    }
    if (p >= 2.0) return 0.0;
    return std::exp(-std::pow(spec.mean, 2.0 - p) / ((2.0 - p) * spec.dispersion));
}

double variation_index(const ModelSpec& spec) {
    const double vi = spec.dispersion * std::pow(spec.mean, spec.power.value() - 2.0);
    return spec.family == Family::Tweedie ? vi : 1.0 + vi;
}

double matched_geometric_dispersion(double phi) {
    if (!(phi > 1.0)) throw DomainError("no positive geometric dispersion matches phi <= 1");
    return phi - 1.0;
}

}  // namespace twd
