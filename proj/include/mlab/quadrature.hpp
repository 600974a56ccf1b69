#pragma once
// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.

#include <functional>

namespace mlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // sum of |K15 - G7| over the final panels
    long evaluations = 0;
    int panels = 0;
    bool converged = false;
};

/// Integrates f over [a, b], always splitting the panel with the largest
/// error estimate, until the total estimate is <= max(abs_tol, rel_tol*|I|)
/// or max_panels is reached (converged = false then).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                              double rel_tol = 0.0, int max_panels = 4000);

}  // namespace mlab
