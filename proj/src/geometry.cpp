#include "qcbel/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qcbel {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}
}  // namespace

Grid make_grid(double xmin, double xmax, double ymin, double ymax, int nx,
               int ny) {
    if (!(xmax > xmin) || !(ymax > ymin))
        throw std::invalid_argument("make_grid: degenerate bbox");
    if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) ||
        !std::isfinite(ymax))
        throw std::invalid_argument("make_grid: non-finite bbox");
    if (nx < 2 || ny < 2 || nx > 4096 || ny > 4096)
        throw std::invalid_argument("make_grid: resolution out of range");
    Grid g;
    g.xmin = xmin; g.xmax = xmax; g.ymin = ymin; g.ymax = ymax;
    g.nx = nx; g.ny = ny;
    g.dx = (xmax - xmin) / (nx - 1);
    g.dy = (ymax - ymin) / (ny - 1);
    return g;
}

DomainSpec DomainSpec::unit_disk() {
    DomainSpec d;
    d.kind = DomainKind::UnitDisk;
    return d;
}

DomainSpec DomainSpec::annulus(cplx center, double r1, double r2) {
    if (!(0 < r1 && r1 < r2))
        throw InvalidDomain("annulus requires 0 < r1 < r2");
    DomainSpec d;
    d.kind = DomainKind::Annulus;
    d.center = center;
    d.r1 = r1;
    d.r2 = r2;
    return d;
}

namespace {
// Proper segment crossing test for the simplicity check; shared endpoints of
// adjacent edges do not count.
bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
    auto orient = [](cplx p, cplx q, cplx r) {
        double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
                   (q.imag() - p.imag()) * (r.real() - p.real());
        return (v > 0) - (v < 0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}
}  // namespace

DomainSpec DomainSpec::polygon(std::vector<cplx> vertices) {
    if (vertices.size() < 3)
        throw InvalidDomain("polygon needs at least 3 vertices");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j],
                               vertices[(j + 1) % n]))
                throw InvalidDomain("polygon boundary self-intersects");
        }
    DomainSpec d;
    d.kind = DomainKind::Polygon;
    d.vertices = std::move(vertices);
    return d;
}

DomainSpec DomainSpec::square(double half_side) {
    double s = half_side;
    return polygon({{-s, -s}, {s, -s}, {s, s}, {-s, s}});
}

bool detail::point_in_polygon(const std::vector<cplx>& poly, cplx z) {
    // Even-odd ray casting, horizontal ray toward +x.
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = poly[i].imag(), yj = poly[j].imag();
        if ((yi > z.imag()) != (yj > z.imag())) {
            double xcross = poly[j].real() + (poly[i].real() - poly[j].real()) *
                                                 (z.imag() - yj) / (yi - yj);
            if (z.real() < xcross) inside = !inside;
        }
    }
    return inside;
}

bool DomainSpec::contains(cplx z) const {
    switch (kind) {
        case DomainKind::UnitDisk:
            return std::abs(z) < 1.0;
        case DomainKind::Annulus: {
            double d = std::abs(z - center);
            return d > r1 && d < r2;
        }
        case DomainKind::Polygon:
            return detail::point_in_polygon(vertices, z);
    }
    return false;
}

double DomainSpec::boundary_distance(cplx z) const {
    switch (kind) {
        case DomainKind::UnitDisk:
            return 1.0 - std::abs(z);
        case DomainKind::Annulus: {
            double d = std::abs(z - center);
            return std::min(d - r1, r2 - d);
        }
        case DomainKind::Polygon: {
            double best = std::numeric_limits<double>::infinity();
            const std::size_t n = vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                cplx a = vertices[i], b = vertices[(i + 1) % n];
                cplx ab = b - a;
                double t = std::clamp(
                    ((z - a).real() * ab.real() + (z - a).imag() * ab.imag()) /
                        std::norm(ab),
                    0.0, 1.0);
                best = std::min(best, std::abs(z - (a + t * ab)));
            }
            return best;
        }
    }
    return 0.0;
}

double DomainSpec::inradius() const {
    switch (kind) {
        case DomainKind::UnitDisk:
            return 1.0;
        case DomainKind::Annulus:
            return (r2 - r1) / 2;
        case DomainKind::Polygon: {
            // centroid distance to boundary; adequate for convex desk-scale
            // polygons, and a safe lower estimate in general
            cplx c{0, 0};
            for (auto v : vertices) c += v;
            c /= double(vertices.size());
            return boundary_distance(c);
        }
    }
    return 0.0;
}

double DomainSpec::max_distance(cplx z0) const {
    switch (kind) {
        case DomainKind::UnitDisk:
            return std::abs(z0) + 1.0;
        case DomainKind::Annulus:
            return std::abs(z0 - center) + r2;
        case DomainKind::Polygon: {
            double best = 0.0;
            for (auto v : vertices) best = std::max(best, std::abs(v - z0));
            return best;
        }
    }
    return 0.0;
}

double DomainSpec::boundary_length() const {
    switch (kind) {
        case DomainKind::UnitDisk:
            return kTwoPi;
        case DomainKind::Annulus:
            return kTwoPi * (r1 + r2);
        case DomainKind::Polygon: {
            double len = 0.0;
            const std::size_t n = vertices.size();
            for (std::size_t i = 0; i < n; ++i)
                len += std::abs(vertices[(i + 1) % n] - vertices[i]);
            return len;
        }
    }
    return 0.0;
}

cplx DomainSpec::boundary_point(double t) const {
    t = t - std::floor(t);
    switch (kind) {
        case DomainKind::UnitDisk:
            return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
        case DomainKind::Annulus:
            // outer component only; the probe machinery works on the outer
            // boundary of annuli
            return center + r2 * cplx(std::cos(kTwoPi * t), std::sin(kTwoPi * t));
        case DomainKind::Polygon: {
            double total = boundary_length();
            double s = t * total;
            const std::size_t n = vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                cplx a = vertices[i], b = vertices[(i + 1) % n];
                double l = std::abs(b - a);
                if (s <= l || i == n - 1) return a + (s / l) * (b - a);
                s -= l;
            }
            return vertices[0];
        }
    }
    return {0, 0};
}

double DashedLine::total_angle() const {
    double m = 0.0;
    for (const auto& a : arcs) m += a.measure();
    return m;
}

std::vector<cplx> DashedLine::sample_arc(const Arc& a) const {
    int n = std::max(2, int(std::ceil(samples_per_arc * a.measure() / kTwoPi)));
    std::vector<cplx> pts;
    pts.reserve(n + 1);
    for (int k = 0; k <= n; ++k)
        pts.push_back(point(a.a0 + a.measure() * k / n));
    return pts;
}

std::vector<std::uint8_t> domain_mask(const DomainSpec& spec,
                                      const Grid& grid) {
    std::vector<std::uint8_t> mask(grid.size(), 0);
    // nodes exactly on a polygon edge are perturbed by half a spacing before
    // the even-odd test (deterministic tie-break)
    const cplx eps =
        spec.kind == DomainKind::Polygon
            ? cplx(grid.dx / 2 * 1e-7, grid.dy / 2 * 1e-7)
            : cplx(0, 0);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            mask[grid.index(i, j)] = spec.contains(grid.node(i, j) + eps);
    return mask;
}

std::vector<Arc> detail::clip_arcs_cos(const std::vector<Arc>& arcs,
                                       double psi, double t,
                                       bool keep_greater) {
    // Keep-set: {a : cos(a - psi) > t} if keep_greater, else the complement.
    std::vector<Arc> keep;
    if (t <= -1.0) {
        keep = keep_greater ? arcs : std::vector<Arc>{};
        return keep;
    }
    if (t >= 1.0) {
        keep = keep_greater ? std::vector<Arc>{} : arcs;
        return keep;
    }
    double A = std::acos(t);  // in (0, pi)
    // keep-set for "greater": (psi - A, psi + A) mod 2pi
    double lo = keep_greater ? psi - A : psi + A;
    double hi = keep_greater ? psi + A : psi - A + kTwoPi;
    lo = wrap_2pi(lo);
    hi = lo + wrap_2pi(hi - lo + kTwoPi);
    if (hi - lo > kTwoPi) hi -= kTwoPi;
    std::vector<Arc> out;
    for (const auto& arc : arcs) {
        // shift the keep interval into alignment with this arc and intersect;
        // try the three relevant periods
        for (int s = -1; s <= 1; ++s) {
            double l = lo + s * kTwoPi, h = hi + s * kTwoPi;
            double a = std::max(arc.a0, l), b = std::min(arc.a1, h);
            if (b - a > 1e-14) out.push_back({a, b});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Arc& x, const Arc& y) { return x.a0 < y.a0; });
    return out;
}

namespace {
// Arcs of S(z0,r) inside the disk |z - c| < R, as angular intervals.
std::vector<Arc> circle_in_disk(cplx z0, double r, cplx c, double R) {
    double d = std::abs(z0 - c);
    if (d + r <= R) return {{0.0, kTwoPi}};             // fully inside
    if (d >= R + r || d + R <= r) return {};            // disjoint / swallows
    // inside iff cos(a - psi) > t with psi toward the disk center
    double t = (d * d + r * r - R * R) / (2 * d * r);
    double psi = std::arg(c - z0);
    return detail::clip_arcs_cos({{0.0, kTwoPi}}, psi, t, true);
}
}  // namespace

DashedLine circle_trace(const DomainSpec& spec, cplx z0, double r,
                        int n_samples) {
    if (!(r > 0)) throw std::invalid_argument("circle_trace: r must be > 0");
    if (n_samples < 16)
        throw std::invalid_argument("circle_trace: n_samples < 16");
    DashedLine dl;
    dl.center = z0;
    dl.radius = r;
    dl.samples_per_arc = n_samples;

    switch (spec.kind) {
        case DomainKind::UnitDisk:
            dl.arcs = circle_in_disk(z0, r, {0, 0}, 1.0);
            break;
        case DomainKind::Annulus: {
            dl.arcs = circle_in_disk(z0, r, spec.center, spec.r2);
            // subtract the part inside the inner disk
            double d = std::abs(z0 - spec.center);
            if (d < spec.r1 + r && d + spec.r1 > r && d + r > spec.r1) {
                double t =
                    (d * d + r * r - spec.r1 * spec.r1) / (2 * d * r);
                double psi = std::arg(spec.center - z0);
                dl.arcs = detail::clip_arcs_cos(dl.arcs, psi, t, false);
            } else if (d + r <= spec.r1) {
                dl.arcs.clear();  // whole circle inside the hole
            }
            break;
        }
        case DomainKind::Polygon: {
            // angular scan: 4096 rays, bisection refinement of each
            // inside/outside transition to 1e-10 rad
            const int nscan = 4096;
            std::vector<char> in(nscan);
            for (int k = 0; k < nscan; ++k)
                in[k] = spec.contains(dl.point(kTwoPi * k / nscan));
            auto refine = [&](double a_in, double a_out) {
                for (int it = 0; it < 60 && a_out - a_in > 1e-10; ++it) {
                    double m = (a_in + a_out) / 2;
                    (spec.contains(dl.point(m)) ? a_in : a_out) = m;
                }
                return (a_in + a_out) / 2;
            };
            // collect transitions; handle wrap-around by rotating to an
            // outside sample if one exists
            int start = 0;
            while (start < nscan && in[start]) ++start;
            if (start == nscan) {
                dl.arcs = {{0.0, kTwoPi}};  // full circle inside
                break;
            }
            bool any_inside = false;
            for (int k = 0; k < nscan; ++k) any_inside |= bool(in[k]);
            if (!any_inside) break;  // empty
            double open_at = 0.0;
            bool open = false;
            for (int k = 0; k < nscan; ++k) {
                int k0 = (start + k) % nscan, k1 = (start + k + 1) % nscan;
                double a0 = kTwoPi * (start + k) / nscan;
                double a1 = kTwoPi * (start + k + 1) / nscan;
                if (!in[k0] && in[k1]) {
                    // outside -> inside: arc opens between a0 and a1; note
                    // the bisection sense (a_in is the inside endpoint)
                    double lo = a1, hi = a0;
                    for (int it = 0; it < 60 && lo - hi > 1e-10; ++it) {
                        double m = (lo + hi) / 2;
                        (spec.contains(dl.point(m)) ? lo : hi) = m;
                    }
                    open_at = (lo + hi) / 2;
                    open = true;
                } else if (in[k0] && !in[k1]) {
                    double a = refine(a0, a1);
                    if (open) dl.arcs.push_back({open_at, a});
                    open = false;
                }
            }
            break;
        }
    }
    return dl;
}

}  // namespace qcbel
