#include "mlab/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace mlab {

namespace {

// Kronrod abscissae and weights (nodes 1, 3, 5 are the Gauss points).
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7], g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        const double s = f(c - x) + f(c + x);
        k += wgk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                              double rel_tol, int max_panels) {
    std::priority_queue<Panel> queue;
    Panel first = gk15(f, a, b);
    queue.push(first);
    QuadResult r;
    r.evaluations = 15;
    double value = first.value, error = first.error;
    while (true) {
        if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
            r.converged = true;
            break;
        }
        if (int(queue.size()) >= max_panels) break;
        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted in floating point
        queue.pop();
        Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
        r.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    value = 0.0;
    error = 0.0;
    r.panels = int(queue.size());
    while (!queue.empty()) {
        value += queue.top().value;
        error += queue.top().error;
        queue.pop();
    }
    r.value = value;
    r.error = error;
    if (!r.converged) r.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
    return r;
}

}  // namespace mlab
