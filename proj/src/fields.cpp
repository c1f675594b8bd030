#include "qcbel/fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qcbel {

namespace {
template <typename T>
T bilinear(const Grid& g, const std::vector<T>& data, cplx z) {
    double fx = (z.real() - g.xmin) / g.dx;
    double fy = (z.imag() - g.ymin) / g.dy;
    fx = std::clamp(fx, 0.0, double(g.nx - 1));
    fy = std::clamp(fy, 0.0, double(g.ny - 1));
    int i0 = std::min(int(fx), g.nx - 2);
    int j0 = std::min(int(fy), g.ny - 2);
    double tx = fx - i0, ty = fy - j0;
    return (1 - tx) * (1 - ty) * data[g.index(i0, j0)] +
           tx * (1 - ty) * data[g.index(i0 + 1, j0)] +
           (1 - tx) * ty * data[g.index(i0, j0 + 1)] +
           tx * ty * data[g.index(i0 + 1, j0 + 1)];
}
}  // namespace

double RealField::interp(cplx z) const { return bilinear(grid, data, z); }
cplx ComplexField::interp(cplx z) const { return bilinear(grid, data, z); }

RealField dilatation(const ComplexField& mu) {
    RealField k(mu.grid, 1.0);
    k.mask = mu.mask;
    for (int i = 0; i < mu.grid.nx; ++i)
        for (int j = 0; j < mu.grid.ny; ++j) {
            if (!mu.masked(i, j)) continue;
            double a = std::abs(mu.at(i, j));
            if (a >= 1.0) throw EllipticityViolation(i, j);
            k.at(i, j) = (1 + a) / (1 - a);
        }
    return k;
}

ComplexField truncate_mu(const ComplexField& mu, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("truncate_mu: n must be >= 1");
    ComplexField out = mu;
    const double cap = (n - 1) / (n + 1);
    for (auto& v : out.data) {
        double a = std::abs(v);
        if (a > cap) v = (a == 0.0) ? cplx(cap, 0) : v * (cap / a);
    }
    return out;
}

CircleNormResult circle_norm(const RealField& q, const DomainSpec& spec,
                             cplx z0, double r) {
    if (!(r > 0)) throw std::invalid_argument("circle_norm: r must be > 0");
    // sample density resolves the grid's Nyquist scale
    int nsamp = 8 * std::max(16, int(std::ceil(2 * M_PI * r / q.grid.spacing())));
    nsamp = std::min(nsamp, 1 << 17);
    DashedLine dl = circle_trace(spec, z0, r, nsamp);
    CircleNormResult res;
    res.arc_count = int(dl.arcs.size());
    if (dl.empty()) {
        res.empty_intersection = true;
        return res;
    }
    for (const auto& arc : dl.arcs) {
        auto pts = dl.sample_arc(arc);
        double da = arc.measure() / (pts.size() - 1);
        double ds = r * da;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            double qa = q.interp(pts[k]), qb = q.interp(pts[k + 1]);
            res.value += 0.5 * (qa + qb) * ds;
        }
        res.length += r * arc.measure();
    }
    return res;
}

CircleNormResult circle_average(const RealField& q, const DomainSpec& spec,
                                cplx z0, double r) {
    CircleNormResult res = circle_norm(q, spec, z0, r);
    if (!res.empty_intersection && res.length > 0) res.value /= res.length;
    return res;
}

RealField extend_by_zero(const RealField& q, const DomainSpec& spec) {
    RealField out = q;
    out.mask.clear();
    for (int i = 0; i < q.grid.nx; ++i)
        for (int j = 0; j < q.grid.ny; ++j)
            if (!spec.contains(q.grid.node(i, j))) out.at(i, j) = 0.0;
    return out;
}

double grid_integral(const RealField& q) {
    double s = 0.0;
    for (int i = 0; i < q.grid.nx; ++i)
        for (int j = 0; j < q.grid.ny; ++j)
            if (q.masked(i, j)) s += q.at(i, j);
    return s * q.grid.cell_area();
}

RealField real_field(const Grid& g, const DomainSpec& spec,
                     const std::function<double(cplx)>& f) {
    RealField out(g);
    out.mask = domain_mask(spec, g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.node(i, j));
    return out;
}

RealField real_field(const Grid& g, const std::function<double(cplx)>& f) {
    RealField out(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.node(i, j));
    return out;
}

ComplexField complex_field(const Grid& g,
                           const std::function<cplx(cplx)>& f) {
    ComplexField out(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out.at(i, j) = f(g.node(i, j));
    return out;
}

ComplexField mu_constant(const Grid& g, const DomainSpec& spec, cplx c) {
    ComplexField out(g);
    out.mask = domain_mask(spec, g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (out.masked(i, j)) out.at(i, j) = c;
    return out;
}

ComplexField mu_radial_stretch(const Grid& g, const DomainSpec& spec,
                               double k) {
    ComplexField out(g);
    out.mask = domain_mask(spec, g);
    const double c = (k - 1) / (k + 1);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if (!out.masked(i, j)) continue;
            cplx z = g.node(i, j);
            out.at(i, j) = (std::abs(z) == 0.0) ? cplx(c, 0)
                                                : c * z / std::conj(z);
        }
    return out;
}

ComplexField mu_log_blowup(const Grid& g, const DomainSpec& spec, cplx z0,
                           double c) {
    ComplexField out(g);
    out.mask = domain_mask(spec, g);
    const double rmin = g.spacing() / 2;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if (!out.masked(i, j)) continue;
            cplx z = g.node(i, j);
            double r = std::max(std::abs(z - z0), rmin);
            double K = std::max(1.0, c * std::log(1.0 / r));
            double a = (K - 1) / (K + 1);
            cplx dir = (std::abs(z - z0) == 0.0)
                           ? cplx(1, 0)
                           : (z - z0) / std::conj(z - z0);
            out.at(i, j) = a * dir;
        }
    return out;
}

ComplexField load_mu_csv(const Grid& g, const DomainSpec& spec,
                         const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mu CSV: " + path);
    ComplexField out(g);
    out.mask = domain_mask(spec, g);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        std::istringstream ss(line);
        int i, j;
        double re, im;
        char comma;
        if (ss >> i >> comma >> j >> comma >> re >> comma >> im) {
            if (i < 0 || i >= g.nx || j < 0 || j >= g.ny)
                throw std::runtime_error("mu CSV node out of range");
            out.at(i, j) = {re, im};
        }
    }
    return out;
}

}  // namespace qcbel
