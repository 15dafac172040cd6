#pragma once

#include <string>

#include "twd/errors.hpp"

namespace twd {

enum class Family { Tweedie, GeometricTweedie };

enum class Support { RealLine, NonNegativeIntegers, NonNegativeReals, PositiveReals };

struct SupportKind {
    Support kind;
    bool zero_atom;

    bool operator==(const SupportKind&) const = default;
};

// Power index p of the (geometric) Tweedie family. Admissible set is
// (-inf,0] U [1,inf); the gap (0,1) is rejected at construction.
class PowerParam {
public:
    explicit PowerParam(double p);

    double value() const noexcept { return p_; }

    // Stability index (2-p)/(1-p). Undefined at p=1 (kept as a tagged
    // sentinel, see has_alpha); never a floating infinity fed to arithmetic.
    bool has_alpha() const noexcept { return p_ != 1.0; }
    double alpha() const;

    SupportKind support() const noexcept;

    bool operator==(const PowerParam&) const = default;

private:
    double p_;
};

struct ModelSpec {
    Family family;
    PowerParam power;
    double mean;        // m (Tweedie) or m~ (geometric Tweedie)
    double dispersion;  // phi or phi~

    ModelSpec(Family family, PowerParam power, double mean, double dispersion);

    SupportKind support() const noexcept { return power.support(); }
};

std::string family_name(Family f);

// psi_p(m): canonical parameter of the mean. m^(1-p)/(1-p), log m at p=1.
double theta_of_mean(const PowerParam& p, double m);

// K_p(psi_p(m)): cumulant at the canonical parameter. m^(2-p)/(2-p), log m at p=2.
double kappa_of_mean(const PowerParam& p, double m);

// P(X=0). Closed form exp(-m^(2-p)/((2-p)phi)) for Tweedie with p in (1,2);
// 0 for p>=2; geometric Tweedie delegates to the mixture quadrature.
double zero_mass(const ModelSpec& spec);

// Var/mean^2: phi m^(p-2) (Tweedie), 1 + phi~ m~^(p-2) (geometric Tweedie).
double variation_index(const ModelSpec& spec);

// Geometric-gamma dispersion whose variation index matches gamma dispersion
// phi at p=2: phi~ = phi - 1. Requires phi > 1.
double matched_geometric_dispersion(double phi);

}  // namespace twd
