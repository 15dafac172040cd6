#pragma once

#include "twd/model.hpp"

namespace twd {

// Truncation policy for the a_p expansions. A series is cut when the
// term-to-running-sum ratio stays below rel_tol for 3 consecutive terms;
// exceeding max_terms raises an evaluation error carrying the partial sum.
struct SeriesPolicy {
    double rel_tol = 1e-12;
    int max_terms = 20000;
    bool log_space = true;  // sum via log-magnitudes with sign tracking

    void validate() const;
};

struct DensityValue {
    double value;
    bool is_atom;
    double log_value;
};

// Normalizing function a_p(x; phi) of the Tweedie density. Closed forms at
// p in {0,1,2,3}; series elsewhere. force_series evaluates the p>2 series
// even at p=3 (p=2 has no convergent series: alpha=0 degenerates both
// neighbouring expansions).
double a_series(const PowerParam& p, double x, double phi, const SeriesPolicy& policy = {},
                bool force_series = false);

namespace detail {
// log a_p(x; phi) for x in the interior of the support; -inf when the value
// is exactly 0. Used by the density composition to avoid overflow.
double log_a_series(const PowerParam& p, double x, double phi, const SeriesPolicy& policy,
                    bool force_series);

// Saddlepoint log-density estimate for p > 1; used only to pick integration
// windows and to classify cancellation-regime points as negligible.
double saddle_log_density(double p, double x, double m, double phi);
}  // namespace detail

}  // namespace twd
