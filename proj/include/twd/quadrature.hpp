#pragma once

#include <functional>
#include <vector>

#include "twd/errors.hpp"

namespace twd {

// Nodes and weights of the Gauss-Laguerre rule for
//   integral_0^inf exp(-x) g(x) dx  ~=  sum_k w_k g(x_k).
// Weights include the exp(-x) factor and sum to 1. Computed once per order by
// Newton iteration on the Laguerre polynomial roots; no tables shipped.
class GaussLaguerre {
public:
    explicit GaussLaguerre(int node_count);

    int order() const noexcept { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    template <class F>
    double integrate(F&& g) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * g(nodes_[i]);
        return s;
    }

private:
    std::vector<double> nodes_, weights_;
};

// Shared default-order (64) rule; immutable after construction.
const GaussLaguerre& default_laguerre();

// Adaptive Gauss-Kronrod 7/15 on [a,b] to absolute tolerance abs_tol.
// Throws EvalError if the interval budget is exhausted before convergence.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_intervals = 4000);

}  // namespace twd
