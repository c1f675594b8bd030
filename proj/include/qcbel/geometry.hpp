#pragma once
// Grids, planar domains, circles and the dashed lines they cut out of a
// domain.  Everything here is immutable after construction.

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qcbel {

using cplx = std::complex<double>;

struct InvalidDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Uniform Cartesian grid of nodes over a bounding box.  Nodes include both
/// endpoints per axis, so spacing = extent / (resolution - 1).
struct Grid {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
    std::size_t index(int i, int j) const { return std::size_t(i) * ny + j; }
    cplx node(int i, int j) const { return {xmin + i * dx, ymin + j * dy}; }
    double cell_area() const { return dx * dy; }
    double spacing() const { return dx < dy ? dx : dy; }
    bool contains(cplx z) const {
        return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin &&
               z.imag() <= ymax;
    }
};

Grid make_grid(double xmin, double xmax, double ymin, double ymax, int nx,
               int ny);
inline Grid make_grid(double xmin, double xmax, double ymin, double ymax,
                      int n) {
    return make_grid(xmin, xmax, ymin, ymax, n, n);
}

enum class DomainKind { UnitDisk, Polygon, Annulus };

/// A bounded planar domain: the unit disk, a simple polygon, or an annulus.
struct DomainSpec {
    DomainKind kind = DomainKind::UnitDisk;
    std::vector<cplx> vertices;    // polygon only, counterclockwise
    cplx center{0.0, 0.0};         // annulus only
    double r1 = 0.0, r2 = 0.0;     // annulus radii, 0 < r1 < r2

    static DomainSpec unit_disk();
    static DomainSpec polygon(std::vector<cplx> vertices);
    static DomainSpec square(double half_side);  // axis-aligned, centered at 0
    static DomainSpec annulus(cplx center, double r1, double r2);

    bool contains(cplx z) const;
    /// Distance from an interior point to the boundary (exact for disk and
    /// annulus, min vertex/edge distance for polygons).
    double boundary_distance(cplx z) const;
    double inradius() const;
    /// sup_{z in D} |z - z0|
    double max_distance(cplx z0) const;
    /// Closed boundary parameterization, t in [0,1).
    cplx boundary_point(double t) const;
    double boundary_length() const;
};

/// Angular interval [a0, a1] with a1 > a0 (radians, length <= 2*pi).
struct Arc {
    double a0 = 0.0, a1 = 0.0;
    double measure() const { return a1 - a0; }
};

/// The intersection D(z0,r) = D with S(z0,r): a set of circular arcs plus a
/// uniform angular sample count per unit angle.
struct DashedLine {
    cplx center{0.0, 0.0};
    double radius = 0.0;
    std::vector<Arc> arcs;
    int samples_per_arc = 0;  // for the largest arc; scaled by measure

    bool empty() const { return arcs.empty(); }
    double total_angle() const;
    double length() const { return radius * total_angle(); }
    cplx point(double angle) const {
        return center + radius * cplx(std::cos(angle), std::sin(angle));
    }
    /// Sample points of one arc, uniform in angle, endpoints included.
    std::vector<cplx> sample_arc(const Arc& a) const;
};

/// Boolean insideness field over the grid nodes (1 = strictly inside D).
std::vector<std::uint8_t> domain_mask(const DomainSpec& spec,
                                      const Grid& grid);

/// Arcs of S(z0,r) inside D.  Analytic for disk/annulus; angular scanning
/// with bisection refinement for polygons.  Empty circle is not an error.
DashedLine circle_trace(const DomainSpec& spec, cplx z0, double r,
                        int n_samples);

namespace detail {
/// Intersect a set of disjoint arcs with the half-set {a : cos(a - psi) > t}
/// (t in [-1,1] boundary cases included); used by circle-circle clipping.
std::vector<Arc> clip_arcs_cos(const std::vector<Arc>& arcs, double psi,
                               double t, bool keep_greater);
bool point_in_polygon(const std::vector<cplx>& poly, cplx z);
}  // namespace detail

}  // namespace qcbel
