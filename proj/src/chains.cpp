#include "mlab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "mlab/mahler.hpp"

namespace mlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Vec3 = std::array<double, 3>;

LaurentPoly as_xyz(const LaurentPoly& P) {
    const std::vector<std::string> xyz = {"x", "y", "z"};
    if (P.variables() == xyz) return P;
    return P.with_variables(xyz);
}

double wrap(double a) { return a - 2.0 * kPi * std::round(a / (2.0 * kPi)); }

double wrapped_distance(const Vec3& a, const Vec3& b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = wrap(a[k] - b[k]);
        s += d * d;
    }
    return std::sqrt(s);
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// P on the 3-torus as a function of the angles, with its angle gradient.
struct TorusPoly {
    struct Term {
        double c;
        int e[3];
    };
    std::vector<Term> terms;
    double scale = 0.0;

    explicit TorusPoly(const LaurentPoly& P) {
        for (const auto& [e, c] : P.terms()) {
            terms.push_back({to_double(c), {e[0], e[1], e[2]}});
            scale += std::abs(to_double(c));
        }
    }

    cplx eval(const Vec3& u, std::array<cplx, 3>& grad) const {
        cplx G = 0.0;
        grad = {0.0, 0.0, 0.0};
        for (const auto& t : terms) {
            const double ph = t.e[0] * u[0] + t.e[1] * u[1] + t.e[2] * u[2];
            const cplx w = t.c * cplx(std::cos(ph), std::sin(ph));
            G += w;
            const cplx iw(-w.imag(), w.real());
            for (int k = 0; k < 3; ++k) grad[k] += double(t.e[k]) * iw;
        }
        return G;
    }
};

Vec3 curve_tangent(const std::array<cplx, 3>& g) {
    const Vec3 a = {g[0].real(), g[1].real(), g[2].real()};
    const Vec3 b = {g[0].imag(), g[1].imag(), g[2].imag()};
    Vec3 c = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double n = norm3(c);
    if (n > 0)
        for (auto& v : c) v /= n;
    return c;
}

// Minimum-norm Gauss-Newton onto G = 0.
bool correct(const TorusPoly& T, Vec3& u, double max_move) {
    const Vec3 u0 = u;
    std::array<cplx, 3> g;
    for (int it = 0; it < 12; ++it) {
        const cplx G = T.eval(u, g);
        if (std::abs(G) <= 1e-13 * T.scale) return norm3({u[0] - u0[0], u[1] - u0[1], u[2] - u0[2]}) <= max_move;
        const Vec3 a = {g[0].real(), g[1].real(), g[2].real()};
        const Vec3 b = {g[0].imag(), g[1].imag(), g[2].imag()};
        const double aa = dot3(a, a), ab = dot3(a, b), bb = dot3(b, b);
        const double det = aa * bb - ab * ab;
        if (!(det > 1e-24 * T.scale * T.scale * T.scale * T.scale)) return false;
        const double r0 = -G.real(), r1 = -G.imag();
        const double l0 = (bb * r0 - ab * r1) / det, l1 = (aa * r1 - ab * r0) / det;
        for (int k = 0; k < 3; ++k) u[k] += l0 * a[k] + l1 * b[k];
        if (norm3({u[0] - u0[0], u[1] - u0[1], u[2] - u0[2]}) > max_move) return false;
    }
    std::array<cplx, 3> g2;
    return std::abs(T.eval(u, g2)) <= 1e-11 * T.scale;
}

// Gradient (F_t, F_s) of F = log|z| on the curve, z the root through u.
std::array<double, 2> log_modulus_gradient(const std::array<cplx, 3>& g) {
    const cplx i(0.0, 1.0);
    return {std::real(-i * g[0] / g[2]), std::real(-i * g[1] / g[2])};
}

std::array<cplx, 3> point_of(const Vec3& u) {
    return {std::polar(1.0, u[0]), std::polar(1.0, u[1]), std::polar(1.0, u[2])};
}

// Number of fiber roots outside the closed unit disk, counting roots lost
// to a vanishing leading coefficient as outside.
int outside_count(const FiberEvaluator& fe, double t, double s) {
    cplx base[2] = {std::polar(1.0, t), std::polar(1.0, s)};
    auto roots = fe.roots(base);
    std::vector<cplx> c;
    fe.coefficients(base, c);
    double mx = 0.0;
    for (auto v : c) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) {
        base[0] = std::polar(1.0, t + 1e-9);
        roots = fe.roots(base);
    }
    int n = fe.degree() - int(roots.size());
    for (auto r : roots)
        if (std::abs(r) > 1.0) ++n;
    return n;
}

struct Tracer {
    const TorusPoly& T;
    double step;
    double hmin;
    double max_length;

    // Follows the curve from u in direction d until it closes or fails.
    // Returns true when closed; samples/dirs receive the visited points.
    bool run(Vec3 u, Vec3 d, std::vector<Vec3>& pts, std::vector<Vec3>& dirs, double& closing) const {
        const Vec3 start = u;
        pts.push_back(u);
        dirs.push_back(d);
        double travelled = 0.0, h = step;
        std::array<cplx, 3> g;
        while (travelled < max_length) {
            Vec3 v = {u[0] + h * d[0], u[1] + h * d[1], u[2] + h * d[2]};
            bool ok = correct(T, v, 0.5 * h);
            Vec3 dn{};
            if (ok) {
                T.eval(v, g);
                dn = curve_tangent(g);
                if (norm3(dn) < 0.5) ok = false;
                if (dot3(dn, d) < 0) for (auto& x : dn) x = -x;
                if (ok && dot3(dn, d) < 0.9) ok = false;
            }
            if (!ok) {
                h *= 0.5;
                if (h < hmin) return false;
                continue;
            }
            const Vec3 seg = {v[0] - u[0], v[1] - u[1], v[2] - u[2]};
            const double len = norm3(seg);
            if (travelled > 3.0 * step) {
                Vec3 w;
                for (int k = 0; k < 3; ++k) w[k] = wrap(start[k] - u[k]);
                const double lam = std::clamp(dot3(w, seg) / (len * len), 0.0, 1.0);
                const Vec3 q = {w[0] - lam * seg[0], w[1] - lam * seg[1], w[2] - lam * seg[2]};
                if (norm3(q) < 0.5 * h) {
                    if (lam < 1.0) {
                        closing = norm3(w);
                    } else {
                        pts.push_back(v);
                        dirs.push_back(dn);
                        closing = wrapped_distance(v, start);
                    }
                    return true;
                }
            }
            pts.push_back(v);
            dirs.push_back(dn);
            travelled += len;
            u = v;
            d = dn;
            h = std::min(step, 2.0 * h);
        }
        return false;
    }
};

// Arc length of a curve segment from its chord and end tangents (circular
// arc approximation, exact to O(h^5)).
double arc_length(const Vec3& a, const Vec3& b, const Vec3& da, const Vec3& db) {
    const double chord = norm3({b[0] - a[0], b[1] - a[1], b[2] - a[2]});
    const double c = std::clamp(dot3(da, db), -1.0, 1.0);
    const double phi = std::acos(c);
    return chord * (1.0 + phi * phi / 24.0);
}

BoundaryPath make_path(const std::vector<Vec3>& pts, const std::vector<Vec3>& dirs, bool closed, double closing,
                       double step) {
    BoundaryPath p;
    p.closed = closed;
    p.closing = closed ? closing * (1.0 + std::pow(std::acos(std::clamp(dot3(dirs.back(), dirs.front()), -1.0, 1.0)), 2) / 24.0) : 0.0;
    p.step = step;
    double acc = 0.0;
    const cplx i(0.0, 1.0);
    for (size_t k = 0; k < pts.size(); ++k) {
        if (k > 0) acc += arc_length(pts[k - 1], pts[k], dirs[k - 1], dirs[k]);
        const auto xyz = point_of(pts[k]);
        p.samples.push_back(xyz);
        p.angles.push_back(pts[k]);
        p.directions.push_back(dirs[k]);
        p.tangents.push_back({i * xyz[0] * dirs[k][0], i * xyz[1] * dirs[k][1], i * xyz[2] * dirs[k][2]});
        p.arclength.push_back(acc);
    }
    return p;
}

}  // namespace

double RegionMask::t(int i) const { return -kPi + (i + 0.5) * 2.0 * kPi / resolution; }
double RegionMask::s(int j) const { return -kPi + (j + 0.5) * 2.0 * kPi / resolution; }

long RegionMask::count() const {
    long n = 0;
    for (auto c : cells) n += c ? 1 : 0;
    return n;
}

RegionMask deninger_region(const LaurentPoly& P, int resolution) {
    const LaurentPoly Q = as_xyz(P);
    if (!Q.depends_on(2)) throw std::invalid_argument("deninger_region: P must have positive z-degree");
    if (resolution <= 0) throw std::invalid_argument("deninger_region: resolution must be positive");
    const FiberEvaluator fe(Q);
    RegionMask m;
    m.resolution = resolution;
    m.cells.assign(size_t(resolution) * size_t(resolution), 0);
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
            cplx base[2] = {std::polar(1.0, m.t(i)), std::polar(1.0, m.s(j))};
            std::vector<cplx> roots = fe.roots(base);
            bool in = int(roots.size()) < fe.degree();
            for (auto r : roots) in = in || std::abs(r) >= 1.0;
            m.cells[size_t(i) * size_t(resolution) + size_t(j)] = in ? 1 : 0;
        }
    return m;
}

double BoundaryPath::length() const {
    if (arclength.empty()) return 0.0;
    return arclength.back() + (closed ? closing : 0.0);
}

BoundaryPath BoundaryPath::reversed() const {
    BoundaryPath r = *this;
    const size_t n = size();
    for (size_t k = 0; k < n; ++k) {
        r.samples[k] = samples[n - 1 - k];
        r.angles[k] = angles[n - 1 - k];
        for (int c = 0; c < 3; ++c) {
            r.directions[k][c] = -directions[n - 1 - k][c];
            r.tangents[k][c] = -tangents[n - 1 - k][c];
        }
        r.arclength[k] = arclength.back() - arclength[n - 1 - k];
    }
    r.orientation_sign = -orientation_sign;
    return r;
}

TraceReport trace_boundary_report(const LaurentPoly& P, double step) {
    const LaurentPoly Q = as_xyz(P);
    if (!Q.depends_on(2)) throw std::invalid_argument("trace_boundary: P must have positive z-degree");
    if (!(step > 0.0) || step > 0.5) throw std::invalid_argument("trace_boundary: step must lie in (0, 0.5]");
    const TorusPoly T(Q);
    const FiberEvaluator fe(Q);
    const Tracer tracer{T, step, step / 256.0, 400.0};
    TraceReport rep;

    const int M = std::max(64, int(std::ceil(2.0 * kPi / (4.0 * step))));
    const int K = 2 * M;
    auto grid = [&](int j, int n) { return -kPi + (j + 0.5) * 2.0 * kPi / n; };

    auto covered = [&](const Vec3& u) {
        for (const auto& p : rep.paths)
            for (const auto& a : p.angles)
                if (wrapped_distance(a, u) < 2.0 * step) return true;
        return false;
    };

    auto try_seed = [&](double t, double s) {
        cplx base[2] = {std::polar(1.0, t), std::polar(1.0, s)};
        const auto roots = fe.roots(base);
        for (auto r : roots) {
            if (std::abs(std::log(std::abs(r))) > 1e-3) continue;
            Vec3 u = {t, s, std::arg(r)};
            if (!correct(T, u, 1e-2)) continue;
            if (covered(u)) continue;
            std::array<cplx, 3> g;
            T.eval(u, g);
            Vec3 d = curve_tangent(g);
            if (norm3(d) < 0.5) continue;
            const auto gradF = log_modulus_gradient(g);
            const double o = d[0] * gradF[1] - d[1] * gradF[0];
            if (std::abs(o) < 1e-8) continue;
            if (o < 0)
                for (auto& x : d) x = -x;

            std::vector<Vec3> pts, dirs;
            double closing = 0.0;
            const bool closed = tracer.run(u, d, pts, dirs, closing);
            if (!closed) {
                std::vector<Vec3> back, bdirs;
                double unused = 0.0;
                tracer.run(u, {-d[0], -d[1], -d[2]}, back, bdirs, unused);
                std::vector<Vec3> all, adirs;
                for (size_t k = back.size(); k-- > 1;) {
                    all.push_back(back[k]);
                    adirs.push_back({-bdirs[k][0], -bdirs[k][1], -bdirs[k][2]});
                }
                all.insert(all.end(), pts.begin(), pts.end());
                adirs.insert(adirs.end(), dirs.begin(), dirs.end());
                pts.swap(all);
                dirs.swap(adirs);
                std::ostringstream w;
                w << "open chain: path " << rep.paths.size() << " from (t,s) = (" << t << ", " << s
                  << ") did not close (" << pts.size() << " samples)";
                rep.warnings.push_back(w.str());
            }
            rep.paths.push_back(make_path(pts, dirs, closed, closing, step));
        }
    };

    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < M; ++i) {
            const double fixed = grid(i, M);
            auto at = [&](double v) { return pass == 0 ? outside_count(fe, fixed, v) : outside_count(fe, v, fixed); };
            int prev = at(grid(0, K));
            for (int j = 0; j < K; ++j) {
                double a = grid(j, K), b = a + 2.0 * kPi / K;
                const int nb = at(b);
                if (nb == prev) continue;
                int na = prev;
                prev = nb;
                for (int it = 0; it < 40; ++it) {
                    const double mid = 0.5 * (a + b);
                    if (at(mid) == na)
                        a = mid;
                    else
                        b = mid;
                }
                const double v = 0.5 * (a + b);
                if (pass == 0)
                    try_seed(fixed, v);
                else
                    try_seed(v, fixed);
            }
        }
    }
    return rep;
}

std::vector<BoundaryPath> trace_boundary(const LaurentPoly& P, double step) {
    return trace_boundary_report(P, step).paths;
}

int winding_number(const BoundaryPath& path, const RationalExpr& f) {
    if (path.size() < 2) throw WindingError("winding_number: path has fewer than two samples");
    auto value = [&](const std::array<cplx, 3>& p) {
        const cplx v = f.eval(p);
        const double a = std::abs(v);
        if (!(a >= 1e-6) || !(a <= 1e6)) throw WindingError("winding_number: f has a zero or pole near the path");
        return v;
    };
    std::function<double(const std::array<cplx, 3>&, const std::array<cplx, 3>&, cplx, cplx, int)> seg =
        [&](const std::array<cplx, 3>& p, const std::array<cplx, 3>& q, cplx fp, cplx fq, int depth) -> double {
        const double d = std::arg(fq / fp);
        if (std::abs(d) <= kPi / 4) return d;
        if (depth > 30) throw WindingError("winding_number: phase unwrap failed");
        std::array<cplx, 3> m;
        for (int k = 0; k < 3; ++k) m[k] = 0.5 * (p[k] + q[k]);
        const cplx fm = value(m);
        return seg(p, m, fp, fm, depth + 1) + seg(m, q, fm, fq, depth + 1);
    };
    double total = 0.0;
    cplx prev = value(path.samples[0]);
    const cplx first = prev;
    for (size_t k = 1; k < path.size(); ++k) {
        const cplx cur = value(path.samples[k]);
        total += seg(path.samples[k - 1], path.samples[k], prev, cur, 0);
        prev = cur;
    }
    if (path.closed) total += seg(path.samples.back(), path.samples.front(), prev, first, 0);
    const double w = total / (2.0 * kPi);
    const double n = std::round(w);
    if (std::abs(w - n) >= 0.05) throw WindingError("winding_number: total phase is not a multiple of 2 pi");
    return int(n);
}

LaurentPoly maillot_plane_model(const LaurentPoly& P) {
    const LaurentPoly Q = as_xyz(P);
    const auto cz = Q.coefficients_in(2);
    if (cz.size() != 2) throw std::invalid_argument("maillot_plane_model: P must be linear in z");
    const LaurentPoly F = cz[0] * cz[0].inverted() - cz[1] * cz[1].inverted();
    if (F.is_zero()) throw std::invalid_argument("maillot_plane_model: plane model vanishes identically");
    return F.normalized().with_variables({"x", "y"});
}

std::vector<SingularFlag> detect_singular_boundary(const LaurentPoly& P, const std::vector<BoundaryPath>& paths) {
    const LaurentPoly F = maillot_plane_model(P);
    const LaurentPoly Fx = F.derivative(0), Fy = F.derivative(1);
    const LaurentPoly Fxx = Fx.derivative(0), Fxy = Fx.derivative(1), Fyy = Fy.derivative(1);
    std::vector<SingularFlag> flags;

    for (size_t pi = 0; pi < paths.size(); ++pi) {
        const auto& path = paths[pi];
        const size_t n = path.size();
        if (n < 3) continue;
        std::vector<double> gnorm(n);
        for (size_t k = 0; k < n; ++k) {
            const cplx q[2] = {path.samples[k][0], path.samples[k][1]};
            gnorm[k] = std::hypot(std::abs(Fx.eval(q)), std::abs(Fy.eval(q)));
        }
        for (size_t k = 0; k < n; ++k) {
            const double l = gnorm[(k + n - 1) % n], r = gnorm[(k + 1) % n];
            if (!(gnorm[k] <= l && gnorm[k] <= r)) continue;
            cplx q[2] = {path.samples[k][0], path.samples[k][1]};
            bool ok = false;
            for (int it = 0; it < 40; ++it) {
                const cplx gx = Fx.eval(q), gy = Fy.eval(q);
                if (std::abs(gx) + std::abs(gy) < 1e-13 * (1.0 + F.coefficient_scale())) {
                    ok = true;
                    break;
                }
                const cplx a = Fxx.eval(q), b = Fxy.eval(q), d = Fyy.eval(q);
                const cplx det = a * d - b * b;
                if (std::abs(det) < 1e-300) break;
                q[0] -= (d * gx - b * gy) / det;
                q[1] -= (a * gy - b * gx) / det;
                if (!std::isfinite(q[0].real()) || std::abs(q[0]) > 1e3 || std::abs(q[1]) > 1e3) break;
            }
            if (!ok) continue;
            SingularFlag fl;
            fl.x = q[0];
            fl.y = q[1];
            fl.F = std::abs(F.eval(q));
            fl.Fx = std::abs(Fx.eval(q));
            fl.Fy = std::abs(Fy.eval(q));
            if (fl.F >= 1e-6 || fl.Fx >= 1e-6 || fl.Fy >= 1e-6) continue;
            if (std::abs(std::abs(q[0]) - 1.0) > 1e-6 || std::abs(std::abs(q[1]) - 1.0) > 1e-6) continue;
            const double tq = std::arg(q[0]), sq = std::arg(q[1]);
            double best = std::numeric_limits<double>::infinity();
            size_t at = 0;
            for (size_t m = 0; m < n; ++m) {
                const double dd = std::hypot(wrap(path.angles[m][0] - tq), wrap(path.angles[m][1] - sq));
                if (dd < best) {
                    best = dd;
                    at = m;
                }
            }
            if (best > 2.0 * std::max(path.step, 1e-3)) continue;
            bool dup = false;
            for (const auto& e : flags) dup = dup || (std::abs(e.x - q[0]) + std::abs(e.y - q[1]) < 1e-3);
            if (dup) continue;
            fl.path = pi;
            fl.sample = at;
            fl.distance = best;
            flags.push_back(fl);
        }
    }
    return flags;
}

BoundaryPath indent_path(const LaurentPoly& P, const BoundaryPath& path, double eps) {
    const LaurentPoly Q = as_xyz(P);
    const LaurentPoly Px = Q.derivative(0), Py = Q.derivative(1), Pz = Q.derivative(2);
    BoundaryPath out = path;
    out.indented = true;
    const cplx i(0.0, 1.0);
    const double shrink = 1.0 / (1.0 + eps);
    for (size_t k = 0; k < path.size(); ++k) {
        const double t = path.angles[k][0] * shrink;
        const cplx x = std::polar(1.0, t), y = path.samples[k][1];
        const auto roots = fiber_roots(Q, x, y);
        if (roots.empty()) throw std::runtime_error("indent_path: fiber has no roots");
        cplx z = roots[0];
        for (auto r : roots)
            if (std::abs(r - path.samples[k][2]) < std::abs(z - path.samples[k][2])) z = r;
        const cplx p[3] = {x, y, z};
        const cplx dx = i * x * (path.directions[k][0] * shrink);
        const cplx dy = i * y * path.directions[k][1];
        const cplx dz = -(Px.eval(p) * dx + Py.eval(p) * dy) / Pz.eval(p);
        out.samples[k] = {x, y, z};
        out.angles[k][0] = t;
        out.angles[k][2] = std::arg(z);
        out.tangents[k] = {dx, dy, dz};
    }
    return out;
}

void write_paths_csv(std::ostream& out, const std::vector<BoundaryPath>& paths) {
    out << "loop,t,s,re_x,im_x,re_y,im_y,re_z,im_z\n";
    out.precision(12);
    for (size_t p = 0; p < paths.size(); ++p)
        for (size_t k = 0; k < paths[p].size(); ++k) {
            const auto& a = paths[p].angles[k];
            const auto& q = paths[p].samples[k];
            out << p << ',' << wrap(a[0]) << ',' << wrap(a[1]);
            for (int c = 0; c < 3; ++c) out << ',' << q[c].real() << ',' << q[c].imag();
            out << '\n';
        }
}

void write_region_svg(std::ostream& out, const RegionMask& mask, const std::vector<BoundaryPath>& paths) {
    const double size = 512.0;
    const double cell = size / std::max(1, mask.resolution);
    auto px = [&](double t) { return (t + kPi) / (2.0 * kPi) * size; };
    auto py = [&](double s) { return size - (s + kPi) / (2.0 * kPi) * size; };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i < mask.resolution; ++i)
        for (int j = 0; j < mask.resolution; ++j)
            if (mask.at(i, j))
                out << "<rect x=\"" << i * cell << "\" y=\"" << size - (j + 1) * cell << "\" width=\"" << cell
                    << "\" height=\"" << cell << "\" fill=\"#bbbbbb\"/>\n";
    const char* colours[] = {"#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e"};
    for (size_t p = 0; p < paths.size(); ++p) {
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colours[p % 5] << "\" points=\"";
        double lt = 0, ls = 0;
        for (size_t k = 0; k < paths[p].size(); ++k) {
            const double t = wrap(paths[p].angles[k][0]), s = wrap(paths[p].angles[k][1]);
            if (k > 0 && (std::abs(t - lt) > kPi || std::abs(s - ls) > kPi)) {
                out << "\"/>\n<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colours[p % 5]
                    << "\" points=\"";
            }
            out << px(t) << ',' << py(s) << ' ';
            lt = t;
            ls = s;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace mlab
