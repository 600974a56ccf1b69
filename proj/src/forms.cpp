#include "mlab/forms.hpp"

#include <cmath>
#include <string>

#include "mlab/mahler.hpp"
#include "mlab/specialfn.hpp"

namespace mlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_regular(cplx v, const char* what, double floor = 1e-12) {
    const double a = std::abs(v);
    if (!std::isfinite(a) || a < floor || a > 1.0 / floor)
        throw ExcludedPoint(std::string("form evaluated at a zero or pole of ") + what);
}

Jet<1> jet1(const RationalExpr& e, const TangentSample& at, int which) {
    if (which < 0 || size_t(which) >= at.tangents.size()) throw std::invalid_argument("tangent index out of range");
    return e.eval_jet<1>(at.point.data(), {at.tangents[size_t(which)].data()});
}

Jet<2> jet2(const RationalExpr& e, const TangentSample& at) {
    if (at.tangents.size() < 2) throw std::invalid_argument("eval_eta: two tangent vectors required");
    return e.eval_jet<2>(at.point.data(), {at.tangents[0].data(), at.tangents[1].data()});
}

double rho_from_jets(const Jet<1>& f, const Jet<1>& g, double floor) {
    const cplx one_minus = 1.0 - f.v;
    require_regular(f.v, "f", floor);
    require_regular(one_minus, "1 - f", floor);
    require_regular(g.v, "g", floor);
    const double dlog_f = std::real(f.d[0] / f.v);
    const double dlog_1mf = std::real(-f.d[0] / one_minus);
    const double theta = std::log(std::abs(one_minus)) * dlog_f - std::log(std::abs(f.v)) * dlog_1mf;
    return -bloch_wigner(f.v) * std::imag(g.d[0] / g.v) + std::log(std::abs(g.v)) * theta / 3.0;
}

// eta on a bivector from the values and two derivatives of f, g, h.
double eta_from_jets(const Jet<2>& f, const Jet<2>& g, const Jet<2>& h) {
    const Jet<2>* F[3] = {&f, &g, &h};
    double la[3];
    std::array<double, 2> dl[3], da[3];
    for (int k = 0; k < 3; ++k) {
        la[k] = std::log(std::abs(F[k]->v));
        for (int j = 0; j < 2; ++j) {
            const cplx q = F[k]->d[size_t(j)] / F[k]->v;
            dl[k][size_t(j)] = q.real();
            da[k][size_t(j)] = q.imag();
        }
    }
    auto wedge = [](const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] * b[1] - a[1] * b[0]; };
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        s += la[k] * (wedge(dl[a], dl[b]) / 3.0 - wedge(da[a], da[b]));
    }
    return s;
}

Jet<2> one_minus(const Jet<2>& f) {
    Jet<2> r;
    r.v = 1.0 - f.v;
    r.d = {-f.d[0], -f.d[1]};
    return r;
}

double term_rho_at(const Decomposition& d, const TangentSample& at, int which, double floor) {
    double s = 0.0;
    for (const auto& t : d.terms) s += to_double(t.c) * rho_from_jets(jet1(t.f, at, which), jet1(t.g, at, which), floor);
    return s;
}

}  // namespace

double eval_theta(const RationalExpr& f, const RationalExpr& g, const TangentSample& at, int which) {
    const Jet<1> a = jet1(f, at, which), b = jet1(g, at, which);
    require_regular(a.v, "f");
    require_regular(b.v, "g");
    return std::log(std::abs(a.v)) * std::real(b.d[0] / b.v) - std::log(std::abs(b.v)) * std::real(a.d[0] / a.v);
}

double eval_rho(const RationalExpr& f, const RationalExpr& g, const TangentSample& at, int which) {
    return rho_from_jets(jet1(f, at, which), jet1(g, at, which), 1e-12);
}

double eval_eta(const RationalExpr& f, const RationalExpr& g, const RationalExpr& h, const TangentSample& at) {
    const Jet<2> a = jet2(f, at), b = jet2(g, at), c = jet2(h, at);
    require_regular(a.v, "f");
    require_regular(b.v, "g");
    require_regular(c.v, "h");
    return eta_from_jets(a, b, c);
}

double eval_rho_sum(const Decomposition& d, const TangentSample& at, int which) {
    return term_rho_at(d, at, which, 1e-12);
}

double eval_eta_sum(const Decomposition& d, const TangentSample& at) {
    double s = 0.0;
    for (const auto& t : d.terms) {
        const Jet<2> f = jet2(t.f, at), g = jet2(t.g, at);
        const Jet<2> h = one_minus(f);
        require_regular(f.v, "f");
        require_regular(h.v, "1 - f");
        require_regular(g.v, "g");
        s += to_double(t.c) * eta_from_jets(f, h, g);
    }
    return s;
}

PathIntegral integrate_rho(const BoundaryPath& path, const Decomposition& d) {
    PathIntegral out;
    const size_t n = path.size();
    out.samples = n;
    if (n < 2 || d.empty()) return out;
    std::vector<double> w(n);
    for (size_t k = 0; k < n; ++k) {
        TangentSample ts{path.samples[k], {path.tangents[k]}};
        w[k] = term_rho_at(d, ts, 0, 1e-7);
    }
    // Composite trapezoid over the sample indices in idx (closing back to the
    // first sample on closed paths).
    auto trapezoid = [&](const std::vector<size_t>& idx) {
        double s = 0.0;
        for (size_t m = 1; m < idx.size(); ++m)
            s += 0.5 * (path.arclength[idx[m]] - path.arclength[idx[m - 1]]) * (w[idx[m]] + w[idx[m - 1]]);
        if (path.closed) {
            const double len = path.arclength[n - 1] - path.arclength[idx.back()] + path.closing;
            s += 0.5 * len * (w[idx.back()] + w[idx[0]]);
        }
        return s;
    };
    std::vector<size_t> all(n), half;
    for (size_t k = 0; k < n; ++k) all[k] = k;
    for (size_t k = 0; k < n; k += 2) half.push_back(k);
    if (!path.closed && half.back() != n - 1) half.push_back(n - 1);
    const double fine = trapezoid(all), coarse = trapezoid(half);
    out.value = fine + (fine - coarse) / 3.0;
    out.error = std::abs(fine - coarse) / 3.0;
    return out;
}

double residue_formula(const Decomposition& d, const std::array<cplx, 3>& p, const std::vector<int>& valuations) {
    if (valuations.size() != d.size()) throw std::invalid_argument("residue_formula: one valuation per term required");
    double s = 0.0;
    for (size_t j = 0; j < d.size(); ++j) {
        if (valuations[j] == 0) continue;
        const cplx v = d.terms[j].f.eval(p);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;
        s += to_double(d.terms[j].c) * valuations[j] * bloch_wigner(v);
    }
    return -2.0 * kPi * s;
}

PathIntegral indented_integral(const LaurentPoly& P, const BoundaryPath& path, const Decomposition& d, double eps) {
    PathIntegral r[3];
    for (int k = 0; k < 3; ++k) r[k] = integrate_rho(indent_path(P, path, eps / double(1 << k)), d);
    PathIntegral out;
    out.samples = r[0].samples;
    out.value = (8.0 * r[2].value - 6.0 * r[1].value + r[0].value) / 3.0;
    const double linear = 2.0 * r[2].value - r[1].value;
    out.error = std::abs(out.value - linear) + (8.0 * r[2].error + 6.0 * r[1].error + r[0].error) / 3.0;
    return out;
}

BoundaryMeasure mahler_via_boundary(const LaurentPoly& P, const Decomposition& lambda,
                                    const std::vector<BoundaryPath>& paths) {
    BoundaryMeasure out;
    const MahlerResult lead = leading_coeff_measure(P, 1e-10);
    out.leading = lead.value;
    double err = lead.error;
    for (const auto& path : paths) {
        const PathIntegral I = integrate_rho(path, lambda);
        out.integral += I.value;
        err += I.error / (8.0 * kPi * kPi);
    }
    out.value = out.leading - out.integral / (8.0 * kPi * kPi);
    out.error = err;
    return out;
}

}  // namespace mlab
