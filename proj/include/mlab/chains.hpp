#pragma once
// Geometry of the Deninger chain on the torus: region masks, the boundary
// curve where a fiber root crosses |z| = 1, winding numbers, and singular
// points of the Maillot curve met by the boundary.
//
// Orientation convention (used everywhere in this module): at a boundary
// point where the root z(t,s) has |z| = 1, put F = log|z|. The chain is
// {F >= 0} with the orientation dt ^ ds of the (t,s) torus, and its boundary
// is traversed with the region on the left, i.e. (dt, ds) is a positive
// multiple of (F_s, -F_t).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlab/expr.hpp"
#include "mlab/poly.hpp"

namespace mlab {

struct RegionMask {
    int resolution = 0;
    std::vector<std::uint8_t> cells;  // row-major, index i * resolution + j for (t_i, s_j)

    double t(int i) const;
    double s(int j) const;
    bool at(int i, int j) const { return cells[size_t(i) * size_t(resolution) + size_t(j)] != 0; }
    long count() const;
};

/// Marks (t_i, s_j) (cell centres on [-pi,pi]^2) when some root z of
/// P(e^{it}, e^{is}, z) has |z| >= 1.
RegionMask deninger_region(const LaurentPoly& P, int resolution);

/// One traced component of the boundary, sampled on the 3-torus.
struct BoundaryPath {
    std::vector<std::array<cplx, 3>> samples;    // (x, y, z)
    std::vector<std::array<double, 3>> angles;   // (t, s, theta), continuous along the path
    std::vector<std::array<double, 3>> directions;  // unit tangent in angle space
    std::vector<std::array<cplx, 3>> tangents;   // d(x, y, z) / d(arclength)
    std::vector<double> arclength;               // cumulative, in angle space
    double closing = 0.0;                        // length of the last-to-first segment (closed paths)
    bool closed = false;
    int orientation_sign = 1;  // +1 when traversal follows the chain-boundary convention
    double step = 0.0;
    bool indented = false;     // samples were moved off the curve by an epsilon shift

    size_t size() const { return samples.size(); }
    /// Total length, closing segment included for closed paths.
    double length() const;
    BoundaryPath reversed() const;
};

struct TraceReport {
    std::vector<BoundaryPath> paths;
    std::vector<std::string> warnings;  // open chains, corrector failures
};

/// Traces the curve P(e^{it}, e^{is}, e^{i theta}) = 0 by predictor-corrector
/// continuation with steps <= step. Seeds come from sign changes of the
/// number of roots outside the unit circle along t- and s-slices.
TraceReport trace_boundary_report(const LaurentPoly& P, double step);
std::vector<BoundaryPath> trace_boundary(const LaurentPoly& P, double step);

struct WindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Total change of arg f along the path divided by 2 pi (closing segment
/// included for closed paths). f is evaluated at the (x, y, z) samples.
int winding_number(const BoundaryPath& path, const RationalExpr& f);

/// Plane model of the Maillot curve for P linear in its last variable:
/// P = P0 + P1 z gives P0(x,y) P0(1/x,1/y) - P1(x,y) P1(1/x,1/y), cleared of
/// negative exponents.
LaurentPoly maillot_plane_model(const LaurentPoly& P);

struct SingularFlag {
    cplx x, y;         // refined singular point of the plane model
    size_t path = 0;   // index of the path that passes it
    size_t sample = 0; // closest sample on that path
    double distance = 0.0;  // angle-space distance from that sample
    double F = 0.0, Fx = 0.0, Fy = 0.0;  // moduli at the refined point
};

/// Singular points of the plane model that the traced boundary passes through.
std::vector<SingularFlag> detect_singular_boundary(const LaurentPoly& P, const std::vector<BoundaryPath>& paths);

/// Moves every sample from x = e^{it} to x = e^{it/(1+eps)}; z is re-solved
/// and the tangents are rescaled. The result is flagged as indented.
BoundaryPath indent_path(const LaurentPoly& P, const BoundaryPath& path, double eps);

void write_paths_csv(std::ostream& out, const std::vector<BoundaryPath>& paths);
void write_region_svg(std::ostream& out, const RegionMask& mask, const std::vector<BoundaryPath>& paths);

}  // namespace mlab
