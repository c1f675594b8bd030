#include "qcbel/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcbel {

double Polyline::length() const {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        len += std::abs(pts[k + 1] - pts[k]);
    return len;
}

CurveFamily circle_family(cplx z0, double r1, double r2, int n_curves,
                          int samples_per_curve) {
    CurveFamily fam;
    fam.kind = FamilyKind::Paths;
    for (int c = 0; c < n_curves; ++c) {
        // strictly interior radii (midpoint placement)
        double r = r1 + (r2 - r1) * (c + 0.5) / n_curves;
        Polyline p;
        p.pts.reserve(samples_per_curve + 1);
        for (int k = 0; k <= samples_per_curve; ++k) {
            double a = 2 * M_PI * k / samples_per_curve;
            p.pts.push_back(z0 + r * cplx(std::cos(a), std::sin(a)));
        }
        fam.curves.push_back(std::move(p));
    }
    return fam;
}

CurveFamily radial_family(cplx z0, double r1, double r2, int n_curves,
                          int samples_per_curve) {
    CurveFamily fam;
    fam.kind = FamilyKind::Paths;
    for (int c = 0; c < n_curves; ++c) {
        double a = 2 * M_PI * c / n_curves;
        cplx dir{std::cos(a), std::sin(a)};
        Polyline p;
        p.pts.reserve(samples_per_curve + 1);
        for (int k = 0; k <= samples_per_curve; ++k)
            p.pts.push_back(z0 + (r1 + (r2 - r1) * k / samples_per_curve) * dir);
        fam.curves.push_back(std::move(p));
    }
    return fam;
}

CurveFamily dashed_line_family(const DomainSpec& spec, cplx z0, double eps,
                               double eps0, int n_r, int samples) {
    if (!(0 < eps && eps < eps0))
        throw std::invalid_argument("dashed_line_family: need 0 < eps < eps0");
    CurveFamily fam;
    fam.kind = FamilyKind::DashedLines;
    for (int c = 0; c < n_r; ++c) {
        double r = eps + (eps0 - eps) * (c + 0.5) / n_r;
        DashedLine dl = circle_trace(spec, z0, r, samples);
        for (const auto& arc : dl.arcs) {
            Polyline p;
            p.pts = dl.sample_arc(arc);
            if (p.pts.size() >= 2) fam.curves.push_back(std::move(p));
        }
    }
    return fam;
}

CurveFamily map_family(const CurveFamily& fam, const ComplexField& f) {
    CurveFamily out;
    out.kind = fam.kind;
    out.curves.reserve(fam.curves.size());
    for (const auto& c : fam.curves) {
        Polyline p;
        p.pts.reserve(c.pts.size());
        for (cplx z : c.pts) p.pts.push_back(f.interp(z));
        out.curves.push_back(std::move(p));
    }
    return out;
}

double line_integral(const RealField& rho, const Polyline& curve) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < curve.pts.size(); ++k) {
        double ds = std::abs(curve.pts[k + 1] - curve.pts[k]);
        s += 0.5 * (rho.interp(curve.pts[k]) + rho.interp(curve.pts[k + 1])) * ds;
    }
    return s;
}

namespace {

// Arc-length-weighted deposition of a polyline onto grid nodes with
// bilinear spreading.  The resulting weight vector a satisfies
// a . rho ~= line_integral(rho, curve) for bilinear rho.
struct Deposit {
    std::vector<std::size_t> idx;
    std::vector<double> w;
};

Deposit deposit_curve(const Polyline& curve, const Grid& g) {
    // accumulate into a small hash; fixed iteration order restored by sort
    std::vector<std::pair<std::size_t, double>> acc;
    acc.reserve(curve.pts.size() * 4);
    const std::size_t n = curve.pts.size();
    std::vector<double> ds(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double l = std::abs(curve.pts[k + 1] - curve.pts[k]);
        ds[k] += l / 2;
        ds[k + 1] += l / 2;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (ds[k] == 0.0) continue;
        cplx z = curve.pts[k];
        double fx = (z.real() - g.xmin) / g.dx;
        double fy = (z.imag() - g.ymin) / g.dy;
        if (fx < 0 || fy < 0 || fx > g.nx - 1 || fy > g.ny - 1) continue;
        int i0 = std::min(int(fx), g.nx - 2);
        int j0 = std::min(int(fy), g.ny - 2);
        double tx = fx - i0, ty = fy - j0;
        const double ww[4] = {(1 - tx) * (1 - ty), tx * (1 - ty),
                              (1 - tx) * ty, tx * ty};
        const std::size_t ii[4] = {g.index(i0, j0), g.index(i0 + 1, j0),
                                   g.index(i0, j0 + 1), g.index(i0 + 1, j0 + 1)};
        for (int q = 0; q < 4; ++q)
            if (ww[q] > 0) acc.emplace_back(ii[q], ww[q] * ds[k]);
    }
    std::sort(acc.begin(), acc.end());
    Deposit d;
    for (const auto& [i, w] : acc) {
        if (!d.idx.empty() && d.idx.back() == i)
            d.w.back() += w;
        else {
            d.idx.push_back(i);
            d.w.push_back(w);
        }
    }
    return d;
}

}  // namespace

ModulusResult discrete_modulus(const CurveFamily& family, const Grid& grid,
                               double tol, const RealField* weight,
                               int max_iter) {
    if (family.curves.empty())
        throw std::invalid_argument("discrete_modulus: empty family");
    if (!(tol > 0 && tol <= 1e-2))
        throw std::invalid_argument("discrete_modulus: tol out of (0, 1e-2]");
    const double A = grid.cell_area();
    const std::size_t m = family.curves.size();

    std::vector<Deposit> deps(m);
    for (std::size_t c = 0; c < m; ++c)
        deps[c] = deposit_curve(family.curves[c], grid);

    // per-curve curvature of the dual objective: sum a^2 / w
    std::vector<double> norm2(m, 0.0);
    auto wval = [&](std::size_t i) {
        return weight ? std::max(weight->data[i], 1e-30) : 1.0;
    };
    for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < deps[c].idx.size(); ++k)
            s += deps[c].w[k] * deps[c].w[k] / wval(deps[c].idx[k]);
        norm2[c] = s;
    }

    std::vector<double> lam(m, 0.0);
    RealField rho(grid, 0.0);
    int it = 0;
    double worst = 0.0;
    for (it = 1; it <= max_iter; ++it) {
        worst = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            if (norm2[c] == 0.0) continue;  // curve missed the grid entirely
            const auto& d = deps[c];
            double L = 0.0;
            for (std::size_t k = 0; k < d.idx.size(); ++k)
                L += d.w[k] * rho.data[d.idx[k]];
            double dl = 2 * A * (1.0 - L) / norm2[c];
            if (lam[c] + dl < 0) dl = -lam[c];
            if (dl != 0.0) {
                lam[c] += dl;
                for (std::size_t k = 0; k < d.idx.size(); ++k)
                    rho.data[d.idx[k]] += dl * d.w[k] / (2 * A * wval(d.idx[k]));
            }
            double deficit = 1.0 - L;
            if (deficit > worst) worst = deficit;
        }
        if (worst < tol) break;
    }

    ModulusResult res;
    double val = 0.0;
    for (std::size_t i = 0; i < rho.data.size(); ++i)
        val += (weight ? wval(i) : 1.0) * rho.data[i] * rho.data[i];
    res.value = val * A;
    res.density = std::move(rho);
    res.kkt_residual = worst;
    res.iterations = it;
    res.converged = worst < tol;
    return res;
}

WeightedMinResult weighted_min_closed_form(const std::vector<double>& phi,
                                           const std::vector<double>& measure,
                                           double p) {
    if (phi.size() != measure.size() || phi.empty())
        throw std::invalid_argument("weighted_min: size mismatch");
    if (!(p > 1)) throw std::invalid_argument("weighted_min: p must be > 1");
    for (double v : phi)
        if (!(v > 0))
            throw std::invalid_argument("weighted_min: phi must be positive");
    const double lambda = 1.0 / (p - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        s += std::pow(phi[i], -lambda) * measure[i];
    WeightedMinResult res;
    res.value = std::pow(s, -1.0 / lambda);
    res.alpha.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        res.alpha[i] = std::pow(phi[i], -lambda) / s;
    return res;
}

RingBoundResult ring_bound(const RealField& q, const DomainSpec& spec,
                           cplx z0, double r1, double r2, int n_radii) {
    if (!(0 < r1 && r1 < r2))
        throw std::invalid_argument("ring_bound: need 0 < r1 < r2");
    RingBoundResult res;
    res.eta0.center = z0;
    const double dr = (r2 - r1) / n_radii;
    std::vector<double> norms(n_radii);
    for (int k = 0; k < n_radii; ++k) {
        double r = r1 + (k + 0.5) * dr;
        auto cn = circle_norm(q, spec, z0, r);
        norms[k] = cn.value;
        res.eta0.radii.push_back(r);
        if (cn.value <= 0.0) {
            // a/0 = infinity for a > 0: an empty or null radius makes the
            // integral diverge; flag and keep going
            res.degenerate_radius = true;
            res.integral = std::numeric_limits<double>::infinity();
        } else if (std::isfinite(res.integral)) {
            res.integral += dr / cn.value;
        }
    }
    res.bound = std::isfinite(res.integral) && res.integral > 0
                    ? 1.0 / res.integral
                    : 0.0;
    res.eta0.values.resize(n_radii, 0.0);
    if (std::isfinite(res.integral) && res.integral > 0)
        for (int k = 0; k < n_radii; ++k)
            res.eta0.values[k] = 1.0 / (res.integral * norms[k]);
    return res;
}

double dashed_line_bound(const RealField& k, const DomainSpec& spec, cplx z0,
                         double eps, double eps0, int n_radii) {
    if (!(0 < eps && eps < eps0))
        throw std::invalid_argument("dashed_line_bound: need 0 < eps < eps0");
    const double dr = (eps0 - eps) / n_radii;
    double s = 0.0;
    for (int q = 0; q < n_radii; ++q) {
        double r = eps + (q + 0.5) * dr;
        auto cn = circle_norm(k, spec, z0, r);
        if (cn.value <= 0.0) return std::numeric_limits<double>::infinity();
        s += dr / cn.value;
    }
    return s;
}

double grotzsch_bound(double r, double R) {
    if (!(0 < r && r < R))
        throw std::invalid_argument("grotzsch_bound: need 0 < r < R");
    return (2.0 / M_PI) * std::log(R / r);
}

double connection_modulus(const std::vector<std::uint8_t>& mask,
                          const Grid& grid,
                          const std::vector<std::uint8_t>& e_nodes,
                          const std::vector<std::uint8_t>& f_nodes,
                          double cg_tol, int cg_max_iter) {
    const int nx = grid.nx, ny = grid.ny;
    const std::size_t n = grid.size();
    // potential u: 0 on E, 1 on F, harmonic on free masked nodes
    std::vector<double> u(n, 0.0);
    std::vector<std::uint8_t> interior(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        if (f_nodes[i]) u[i] = 1.0;
        else if (!e_nodes[i]) interior[i] = 1;
    }
    auto lap = [&](const std::vector<double>& v, std::vector<double>& out,
                   bool rhs_mode) {
        // masked 5-point Laplacian on free nodes; rhs_mode folds the
        // Dirichlet values into the right-hand side
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                std::size_t id = grid.index(i, j);
                if (!interior[id]) { out[id] = 0.0; continue; }
                double diag = 0.0, off = 0.0, rhs = 0.0;
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int q = 0; q < 4; ++q) {
                    int ii = i + di[q], jj = j + dj[q];
                    if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
                    std::size_t nb = grid.index(ii, jj);
                    if (!mask[nb]) continue;
                    diag += 1.0;
                    if (interior[nb]) off += v[nb];
                    else rhs += u[nb];
                }
                out[id] = rhs_mode ? rhs : diag * v[id] - off;
            }
    };
    std::vector<double> b(n, 0.0), x(n, 0.0), r(n), pvec(n), ap(n);
    lap(x, b, true);  // b from boundary data
    lap(x, r, false);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    pvec = r;
    double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    double rr0 = rr;
    for (int it = 0; it < cg_max_iter && rr > cg_tol * cg_tol * rr0 &&
                     rr > 1e-300; ++it) {
        lap(pvec, ap, false);
        double pap = std::inner_product(pvec.begin(), pvec.end(), ap.begin(), 0.0);
        if (pap <= 0) break;
        double alpha = rr / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * pvec[i];
            r[i] -= alpha * ap[i];
        }
        double rr_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) pvec[i] = r[i] + beta * pvec[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (interior[i]) u[i] = x[i];
    // Dirichlet energy over in-mask links (the grid factors cancel in 2D)
    double energy = 0.0;
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            std::size_t a = grid.index(i, j), bnd = grid.index(i + 1, j);
            if (mask[a] && mask[bnd]) {
                double d = u[bnd] - u[a];
                energy += d * d;
            }
        }
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            std::size_t a = grid.index(i, j), bnd = grid.index(i, j + 1);
            if (mask[a] && mask[bnd]) {
                double d = u[bnd] - u[a];
                energy += d * d;
            }
        }
    return energy;
}

namespace {

std::vector<std::uint8_t> snap_polyline_nodes(const std::vector<cplx>& pts,
                                              const Grid& g,
                                              const std::vector<std::uint8_t>& mask) {
    std::vector<std::uint8_t> out(g.size(), 0);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        cplx a = pts[k], b = pts[k + 1];
        int steps = std::max(2, int(std::abs(b - a) / (0.5 * g.spacing())) + 1);
        for (int s = 0; s <= steps; ++s) {
            cplx p = a + (double(s) / steps) * (b - a);
            int i = int(std::lround((p.real() - g.xmin) / g.dx));
            int j = int(std::lround((p.imag() - g.ymin) / g.dy));
            if (i >= 0 && i < g.nx && j >= 0 && j < g.ny) {
                std::size_t id = g.index(i, j);
                if (mask[id]) out[id] = 1;
            }
        }
    }
    return out;
}

// Boundary-hugging continuum near z0: walk the boundary from the parameter
// closest to z0 in direction sgn, offset inward, keeping the points whose
// distance to z0 lies in [r_lo, r_hi].
std::vector<cplx> hugging_arc(const DomainSpec& spec, cplx z0, double offset,
                              double r_lo, double r_hi, int sgn) {
    const int n_samp = 8192;
    double t0 = 0.0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_samp; ++k) {
        double t = double(k) / n_samp;
        double d = std::abs(spec.boundary_point(t) - z0);
        if (d < best) { best = d; t0 = t; }
    }
    std::vector<cplx> pts;
    const double dt = 1.0 / n_samp;
    for (int k = 1; k < n_samp / 2; ++k) {
        double t = t0 + sgn * k * dt;
        cplx b = spec.boundary_point(t);
        double d = std::abs(b - z0);
        if (d > r_hi) break;
        if (d < r_lo) continue;
        // inward normal from the local tangent
        cplx tan = spec.boundary_point(t + dt / 4) - spec.boundary_point(t - dt / 4);
        tan /= std::abs(tan);
        cplx nrm{-tan.imag(), tan.real()};  // boundary runs counterclockwise
        cplx p = b + offset * nrm;
        if (!spec.contains(p)) p = b - offset * nrm;
        pts.push_back(p);
    }
    return pts;
}

}  // namespace

RadialProfile weak_flatness_probe(const DomainSpec& spec, const Grid& grid,
                                  cplx z0,
                                  const std::vector<double>& inner_radii,
                                  const WeakFlatnessOptions& opt) {
    const double h = grid.spacing();
    const double offset = opt.hug_offset_cells * h;
    std::vector<std::uint8_t> mask = domain_mask(spec, grid);

    if (opt.slit) {
        // zero-width barrier: remove nodes within half a spacing of it
        auto [sa, sb] = *opt.slit;
        cplx dir = (sb - sa) / std::abs(sb - sa);
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                cplx p = grid.node(i, j);
                double t = ((p - sa) * std::conj(dir)).real();
                if (t < -h / 2 || t > std::abs(sb - sa) + h / 2) continue;
                double d = std::abs(((p - sa) * std::conj(dir)).imag());
                if (d <= h / 2) mask[grid.index(i, j)] = 0;
            }
        z0 = opt.slit_probe_center;
    } else {
        if (spec.boundary_distance(z0) > grid.spacing() * 1.5)
            throw std::invalid_argument(
                "weak_flatness_probe: z0 not within spacing of the boundary");
    }

    RadialProfile prof;
    prof.center = z0;
    const double R = opt.outer_radius;
    for (double r : inner_radii) {
        if (!(r > 0 && r < R))
            throw std::invalid_argument("weak_flatness_probe: bad inner radius");
        std::vector<std::uint8_t> E, F;
        if (opt.slit) {
            auto [sa, sb] = *opt.slit;
            cplx dir = (sb - sa) / std::abs(sb - sa);
            cplx nrm{-dir.imag(), dir.real()};
            double o = 2 * h;
            double rp = std::sqrt(std::max(r * r - o * o, (h / 2) * (h / 2)));
            double Rp = std::sqrt(std::max(R * R - o * o, 4 * (h / 2) * (h / 2)));
            std::vector<cplx> e_pts{z0 - Rp * dir + o * nrm,
                                    z0 + Rp * dir + o * nrm};
            std::vector<cplx> f_pts{z0 - rp * dir - o * nrm,
                                    z0 + Rp * dir - o * nrm};
            E = snap_polyline_nodes(e_pts, grid, mask);
            F = snap_polyline_nodes(f_pts, grid, mask);
        } else {
            E = snap_polyline_nodes(hugging_arc(spec, z0, offset, r, R, +1),
                                    grid, mask);
            F = snap_polyline_nodes(hugging_arc(spec, z0, offset, r, R, -1),
                                    grid, mask);
        }
        bool has_e = false, has_f = false;
        for (std::size_t i = 0; i < E.size(); ++i) {
            has_e |= bool(E[i]);
            has_f |= bool(F[i]);
        }
        if (!has_e || !has_f)
            throw std::invalid_argument(
                "weak_flatness_probe: empty test continuum (radius too small "
                "for the grid)");
        prof.radii.push_back(r);
        prof.values.push_back(connection_modulus(mask, grid, E, F));
    }
    // profile is indexed by shrinking radius: sort radii descending so the
    // last entry is the smallest neighborhood
    std::vector<std::size_t> ord(prof.radii.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
        return prof.radii[a] > prof.radii[b];
    });
    RadialProfile sorted;
    sorted.center = prof.center;
    for (std::size_t k : ord) {
        sorted.radii.push_back(prof.radii[k]);
        sorted.values.push_back(prof.values[k]);
    }
    return sorted;
}

InequalityCheckReport modulus_inequality_check(const ComplexField& f,
                                               const ComplexField& mu,
                                               const DomainSpec& spec,
                                               cplx z0, double eps,
                                               double eps0, double tol) {
    InequalityCheckReport rep;
    const Grid& g = f.grid;
    // enough radii that adjacent dashed lines are about one cell apart
    int n_r = std::max(64, int(std::ceil(3 * (eps0 - eps) / g.spacing())));
    int samples = std::max(64, int(std::ceil(2 * M_PI * eps0 / g.spacing())));
    CurveFamily sigma = dashed_line_family(spec, z0, eps, eps0, n_r, samples);
    if (sigma.curves.empty())
        throw std::invalid_argument("modulus_inequality_check: empty family");

    // left side: modulus of the image family on an image grid of the same
    // resolution
    CurveFamily image = map_family(sigma, f);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& c : image.curves)
        for (cplx w : c.pts) {
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                rep.clipped = true;
                rep.inconclusive = true;
                return rep;
            }
            xmin = std::min(xmin, w.real());
            xmax = std::max(xmax, w.real());
            ymin = std::min(ymin, w.imag());
            ymax = std::max(ymax, w.imag());
        }
    double mx = 0.05 * (xmax - xmin) + 1e-12, my = 0.05 * (ymax - ymin) + 1e-12;
    Grid ig = make_grid(xmin - mx, xmax + mx, ymin - my, ymax + my,
                        std::min(g.nx, 4096), std::min(g.ny, 4096));
    // the image bbox can be much smaller than the source, leaving adjacent
    // image curves several image cells apart; rebuild the family dense
    // enough that they sit about a third of an image cell apart
    double img_radial = 0.25 * ((xmax - xmin) + (ymax - ymin));
    int n_need = int(std::ceil(3 * img_radial / ig.spacing()));
    if (n_need > n_r) {
        int s_need =
            std::max(samples, int(std::ceil(2 * M_PI * img_radial /
                                            ig.spacing())));
        sigma = dashed_line_family(spec, z0, eps, eps0, n_need, s_need);
        image = map_family(sigma, f);
    }
    rep.lhs = discrete_modulus(image, ig, tol).value;

    // right side 1: weighted modulus with weight 1/K on the source family
    RealField K = dilatation(mu);
    RealField invK(g, 1.0);
    for (std::size_t i = 0; i < K.data.size(); ++i)
        invK.data[i] = 1.0 / K.data[i];
    rep.rhs_weighted = discrete_modulus(sigma, g, tol, &invK).value;

    // right side 2: the radial integral bound
    rep.rhs_radial = dashed_line_bound(K, spec, z0, eps, eps0);

    rep.margin_weighted = (rep.lhs - rep.rhs_weighted) / rep.rhs_weighted;
    rep.margin_radial = (rep.lhs - rep.rhs_radial) / rep.rhs_radial;
    return rep;
}

}  // namespace qcbel
