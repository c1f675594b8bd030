#include "qcbel/dirichlet.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <random>

namespace qcbel {

namespace {

// cached 1D complex FFT of fixed size
struct Fft1d {
    int n;
    fftw_complex* buf;
    fftw_plan fwd, bwd;
    explicit Fft1d(int n_) : n(n_) {
        buf = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft1d() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Fft1d(const Fft1d&) = delete;
};

Fft1d& fft_for(int n) {
    static std::map<int, std::unique_ptr<Fft1d>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft1d>(n)).first;
    return *it->second;
}

/// Circle conjugation operator: the harmonic conjugate boundary values of
/// the given periodic samples (zero mean output).
std::vector<double> conjugate_samples(const std::vector<double>& g) {
    int n = int(g.size());
    Fft1d& fft = fft_for(n);
    for (int j = 0; j < n; ++j) {
        fft.buf[j][0] = g[j];
        fft.buf[j][1] = 0.0;
    }
    fftw_execute(fft.fwd);
    for (int k = 0; k < n; ++k) {
        int sk = k == 0 || 2 * k == n ? 0 : (k < n / 2 ? 1 : -1);
        double re = fft.buf[k][0], im = fft.buf[k][1];
        // multiply by -i * sgn(k)
        fft.buf[k][0] = sk * im;
        fft.buf[k][1] = -sk * re;
    }
    fftw_execute(fft.bwd);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = fft.buf[j][0] / n;
    return out;
}

/// Power-series coefficients of the holomorphic extension of real periodic
/// samples: h(z) = c[0] + sum_k c[k] z^k, Re h = samples on the circle,
/// Im h(0) = 0.
std::vector<cplx> holomorphic_coeffs(const std::vector<double>& g) {
    int n = int(g.size());
    Fft1d& fft = fft_for(n);
    for (int j = 0; j < n; ++j) {
        fft.buf[j][0] = g[j];
        fft.buf[j][1] = 0.0;
    }
    fftw_execute(fft.fwd);
    std::vector<cplx> c(n / 2);
    c[0] = cplx(fft.buf[0][0] / n, 0.0);
    for (int k = 1; k < n / 2; ++k)
        c[k] = 2.0 / n * cplx(fft.buf[k][0], fft.buf[k][1]);
    return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx s(0, 0);
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

cplx horner_derivative(const std::vector<cplx>& c, cplx z) {
    cplx s(0, 0);
    for (std::size_t k = c.size(); k-- > 1;) s = s * z + double(k) * c[k];
    return s;
}

double wrap_2pi(double a) {
    a = std::fmod(a, 2 * M_PI);
    return a < 0 ? a + 2 * M_PI : a;
}

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real()
                                    : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> hull(2 * pts.size());
    std::size_t k = 0;
    for (const cplx& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        const cplx& p = pts[i];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

double hull_diameter(const std::vector<cplx>& hull) {
    double d = 0.0;
    for (std::size_t a = 0; a < hull.size(); ++a)
        for (std::size_t b = a + 1; b < hull.size(); ++b)
            d = std::max(d, std::abs(hull[a] - hull[b]));
    return d;
}

}  // namespace

BoundaryData BoundaryData::from_function(
    int n, const std::function<double(double)>& f) {
    if (n < 8) throw std::invalid_argument("boundary data: need >= 8 nodes");
    BoundaryData bd;
    bd.t.resize(n);
    bd.values.resize(n);
    for (int j = 0; j < n; ++j) {
        bd.t[j] = double(j) / n;
        bd.values[j] = f(bd.t[j]);
        if (!std::isfinite(bd.values[j]))
            throw std::invalid_argument("boundary data: non-finite sample");
    }
    return bd;
}

double BoundaryData::eval(double param) const {
    double p = param - std::floor(param);
    auto it = std::upper_bound(t.begin(), t.end(), p);
    std::size_t hi = it - t.begin();            // first node above p
    std::size_t lo = (hi == 0 ? t.size() : hi) - 1;
    double t_lo = t[lo], t_hi;
    double v_lo = values[lo], v_hi;
    if (hi == t.size() || hi == 0) {  // wrap segment
        t_hi = t.front() + 1.0;
        v_hi = values.front();
        if (hi == 0) {
            t_lo = t.back() - 1.0;
            v_lo = values.back();
            t_hi = t.front();
        }
    } else {
        t_hi = t[hi];
        v_hi = values[hi];
    }
    double w = t_hi == t_lo ? 0.0 : (p - t_lo) / (t_hi - t_lo);
    return (1 - w) * v_lo + w * v_hi;
}

cplx schwarz_integral(const BoundaryData& phi, cplx z, int N) {
    if (N < 256) throw std::invalid_argument("schwarz_integral: N must be >= 256");
    if (std::abs(z) > 1.0 - 2 * M_PI / N)
        throw std::invalid_argument(
            "schwarz_integral: point too close to the circle for this N");
    cplx s(0, 0);
    for (int j = 0; j < N; ++j) {
        double th = 2 * M_PI * j / N;
        cplx zeta(std::cos(th), std::sin(th));
        s += phi.eval(double(j) / N) * (zeta + z) / (zeta - z);
    }
    return s / double(N);
}

std::vector<double> trace_check(const std::function<cplx(cplx)>& h,
                                const BoundaryData& phi,
                                const std::vector<double>& radii,
                                int n_angles) {
    std::vector<double> out;
    for (double r : radii) {
        double sup = 0.0;
        for (int a = 0; a < n_angles; ++a) {
            double th = 2 * M_PI * a / n_angles;
            double err = std::abs(
                h(r * cplx(std::cos(th), std::sin(th))).real() -
                phi.eval(double(a) / n_angles));
            sup = std::max(sup, err);
        }
        out.push_back(sup);
    }
    return out;
}

TheodorsenMap theodorsen_riemann(const std::function<double(double)>& rho,
                                 double tol, int max_iter) {
    const int N = 2048;
    // star-shape and smoothness screen on a fine angular grid
    double eps_cond = 0.0;
    for (int j = 0; j < N; ++j) {
        double th = 2 * M_PI * j / N;
        double r = rho(th);
        if (!(r > 0) || !std::isfinite(r))
            throw InvalidDomain("theodorsen_riemann: radius must be positive");
        double dth = 2 * M_PI / N;
        double dlog = (std::log(rho(th + dth)) - std::log(rho(th - dth))) /
                      (2 * dth);
        eps_cond = std::max(eps_cond, std::abs(dlog));
    }
    if (eps_cond >= 1.0)
        throw InvalidDomain(
            "theodorsen_riemann: boundary slope too steep for the iteration");

    TheodorsenMap map;
    map.phi_nodes.resize(N);
    map.theta.resize(N);
    for (int j = 0; j < N; ++j) {
        map.phi_nodes[j] = 2 * M_PI * j / N;
        map.theta[j] = map.phi_nodes[j];
    }
    std::vector<double> logr(N), conj;
    bool converged = false;
    for (int it = 1; it <= max_iter; ++it) {
        for (int j = 0; j < N; ++j) logr[j] = std::log(rho(map.theta[j]));
        conj = conjugate_samples(logr);
        double diff = 0.0;
        for (int j = 0; j < N; ++j) {
            double next = map.phi_nodes[j] + conj[j];
            diff = std::max(diff, std::abs(next - map.theta[j]));
            map.theta[j] = next;
        }
        map.iterations = it;
        map.residual = diff;
        if (diff < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergence(max_iter);

    for (int j = 0; j < N; ++j) logr[j] = std::log(rho(map.theta[j]));
    auto coeffs = std::make_shared<std::vector<cplx>>(holomorphic_coeffs(logr));
    map.to_domain = [coeffs](cplx z) {
        return z * std::exp(horner(*coeffs, z));
    };

    // inverse boundary correspondence for Newton starting points
    auto theta_tab = std::make_shared<std::vector<double>>(map.theta);
    double theta0 = map.theta[0];
    auto rho_fn = std::make_shared<std::function<double(double)>>(rho);
    auto to_domain = map.to_domain;
    map.to_disk = [coeffs, theta_tab, theta0, rho_fn, to_domain](cplx w) {
        const int n = int(theta_tab->size());
        if (w == cplx(0, 0)) return cplx(0, 0);
        double th_w = std::atan2(w.imag(), w.real());
        // locate th_w in the increasing correspondence (unwrap to theta0 base)
        double th_u = theta0 + wrap_2pi(th_w - theta0);
        auto it = std::lower_bound(theta_tab->begin(), theta_tab->end(), th_u);
        std::size_t hi = std::min<std::size_t>(it - theta_tab->begin(), n - 1);
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        double t_lo = (*theta_tab)[lo], t_hi = (*theta_tab)[hi];
        double wgt = t_hi == t_lo ? 0.0 : (th_u - t_lo) / (t_hi - t_lo);
        double phi0 = 2 * M_PI * (lo + wgt) / n;
        double rr = std::min(std::abs(w) / (*rho_fn)(th_w), 0.999999);
        cplx z = rr * cplx(std::cos(phi0), std::sin(phi0));
        for (int k = 0; k < 80; ++k) {
            cplx h = horner(*coeffs, z);
            cplx F = z * std::exp(h);
            cplx dF = std::exp(h) * (1.0 + z * horner_derivative(*coeffs, z));
            cplx step = (F - w) / dF;
            z -= step;
            if (std::abs(z) > 1.0) z /= std::abs(z);
            if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) break;
        }
        return z;
    };
    return map;
}

DirichletReport solve_dirichlet(const ComplexField& mu, const DomainSpec& spec,
                                const BoundaryData& phi, double truncation_n,
                                double solver_tol) {
    DirichletReport rep;
    rep.truncation = truncation_n;

    double vmin = *std::min_element(phi.values.begin(), phi.values.end());
    double vmax = *std::max_element(phi.values.begin(), phi.values.end());
    if (vmax - vmin < 1e-13) {
        rep.constant_branch = true;
        rep.constant_value = cplx(0.5 * (vmin + vmax), 0.0);
        cplx c = rep.constant_value;
        rep.evaluate = [c](cplx) { return c; };
        rep.analytic_part = [c](cplx) { return c; };
        rep.straightening = [](cplx z) { return z; };
        return rep;
    }

    // stage 1: global map with the truncated coefficient
    ComplexField mu_t = truncate_mu(mu, truncation_n);
    rep.g0 = mrm_solve(mu_t, solver_tol);
    const ComplexField& g0f = rep.g0.f;
    auto g0_eval = [&g0f](cplx z) { return g0f.interp(z); };

    // stage 2: straighten the image through its star-shaped polar boundary
    cplx dom_center = spec.kind == DomainKind::Polygon
                          ? [&] {
                                cplx s{0, 0};
                                for (cplx v : spec.vertices) s += v;
                                return s / double(spec.vertices.size());
                            }()
                          : spec.center;
    cplx img_center = g0_eval(dom_center);
    const int M = 2048;
    std::vector<double> th(M), rr(M);
    double prev = 0.0, total = 0.0;
    for (int j = 0; j < M; ++j) {
        cplx w = g0_eval(spec.boundary_point(double(j) / M)) - img_center;
        rr[j] = std::abs(w);
        double a = std::atan2(w.imag(), w.real());
        if (j == 0) {
            th[j] = a;
        } else {
            double d = a - prev;
            while (d <= -M_PI) d += 2 * M_PI;
            while (d > M_PI) d -= 2 * M_PI;
            if (d <= 0) total -= 1;  // angular backtracking: not star-shaped
            th[j] = th[j - 1] + d;
        }
        prev = a;
    }
    if (total < 0 || th[M - 1] - th[0] <= 0 || th[M - 1] - th[0] > 2 * M_PI)
        throw InvalidDomain(
            "solve_dirichlet: image boundary is not star-shaped about the "
            "image center; lower the truncation or shrink the coefficient");
    auto th_tab = std::make_shared<std::vector<double>>(th);
    auto rr_tab = std::make_shared<std::vector<double>>(rr);
    double th_base = th[0];
    auto rho = [th_tab, rr_tab, th_base](double theta) {
        const int n = int(th_tab->size());
        double tu = th_base + wrap_2pi(theta - th_base);
        auto it = std::lower_bound(th_tab->begin(), th_tab->end(), tu);
        std::size_t hi = it - th_tab->begin();
        if (hi == 0) return (*rr_tab)[0];
        if (hi >= std::size_t(n)) {  // wrap segment back to the first node
            double t_lo = (*th_tab)[n - 1], t_hi = th_base + 2 * M_PI;
            double w = t_hi == t_lo ? 0.0 : (tu - t_lo) / (t_hi - t_lo);
            return (1 - w) * (*rr_tab)[n - 1] + w * (*rr_tab)[0];
        }
        double t_lo = (*th_tab)[hi - 1], t_hi = (*th_tab)[hi];
        double w = t_hi == t_lo ? 0.0 : (tu - t_lo) / (t_hi - t_lo);
        return (1 - w) * (*rr_tab)[hi - 1] + w * (*rr_tab)[hi];
    };
    TheodorsenMap straighten = theodorsen_riemann(rho, 1e-12, 400);

    auto to_disk = straighten.to_disk;
    auto G = [g0f = rep.g0.f, img_center, to_disk](cplx z) {
        return to_disk(g0f.interp(z) - img_center);
    };
    rep.straightening = G;

    // stage 3: transport the boundary data through the correspondence
    {
        std::vector<std::pair<double, double>> nodes(M);
        for (int j = 0; j < M; ++j) {
            // angle on the disk side of the boundary point at parameter j/M
            cplx zeta = G(spec.boundary_point(double(j) / M));
            double psi = wrap_2pi(std::atan2(zeta.imag(), zeta.real()));
            nodes[j] = {psi / (2 * M_PI), phi.eval(double(j) / M)};
        }
        std::sort(nodes.begin(), nodes.end());
        BoundaryData moved;
        for (auto& [t, v] : nodes) {
            if (!moved.t.empty() && t <= moved.t.back()) continue;
            moved.t.push_back(t);
            moved.values.push_back(v);
        }
        // stage 4: harmonic extension with a real-axis gauge at the origin
        const int N = 2048;
        auto data = std::make_shared<BoundaryData>(std::move(moved));
        rep.analytic_part = [data, N](cplx zeta) {
            double a = std::abs(zeta);
            // strictly inside the quadrature guard so roundoff after the
            // rescale cannot trip it
            double cap = (1.0 - 2 * M_PI / N) * (1.0 - 1e-12);
            if (a > cap) zeta *= cap / a;
            return schwarz_integral(*data, zeta, N);
        };
    }

    // stage 5: compose and verify
    auto h = rep.analytic_part;
    rep.evaluate = [h, G](cplx z) { return h(G(z)); };

    const Grid& g = mu.grid;
    rep.f = ComplexField(g);
    rep.f.mask.assign(g.size(), 0);
    double erode = 2.5 * g.spacing();
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            cplx z = g.node(i, j);
            if (spec.contains(z) && spec.boundary_distance(z) > erode) {
                rep.f.at(i, j) = rep.evaluate(z);
                rep.f.mask[g.index(i, j)] = 1;
            }
        }
    ComplexField mu_masked = mu_t;
    mu_masked.mask = rep.f.mask;
    rep.residual = beltrami_residual(rep.f, mu_masked);

    std::vector<double> radii;
    for (int k = 3; k <= 8; ++k) radii.push_back(1.0 - std::pow(2.0, -k));
    rep.trace_radii = radii;
    auto eval = rep.evaluate;
    cplx c0 = dom_center;
    DomainSpec spec_copy = spec;
    auto scaled = [eval, c0, spec_copy](cplx unit) {
        // radius along the boundary ray through the scaled unit-circle point
        double t = wrap_2pi(std::atan2(unit.imag(), unit.real())) / (2 * M_PI);
        cplx b = spec_copy.boundary_point(t);
        return eval(c0 + std::abs(unit) * (b - c0));
    };
    rep.trace_errors = trace_check(scaled, phi, radii, 1024);

    rep.jacobian_positive_fraction = homeo_check(rep.g0).positive_fraction;
    return rep;
}

OscillationProfile boundary_oscillation(const std::function<cplx(cplx)>& f,
                                        const DomainSpec& spec, cplx z0,
                                        const std::vector<double>& eps_ladder,
                                        std::uint64_t seed) {
    OscillationProfile out;
    out.profile.center = z0;
    std::vector<double> ladder(eps_ladder);
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int want = 10000;
    for (double eps : ladder) {
        std::vector<cplx> img;
        img.reserve(want);
        long long tries = 0, cap = 400LL * want;
        while (int(img.size()) < want && tries < cap) {
            ++tries;
            cplx z = z0 + eps * cplx(u(rng), u(rng));
            if (std::abs(z - z0) > eps || !spec.contains(z)) continue;
            img.push_back(f(z));
        }
        if (int(img.size()) < 50) {
            out.truncated = true;
            break;
        }
        out.profile.radii.push_back(eps);
        out.profile.values.push_back(hull_diameter(convex_hull(img)));
    }
    return out;
}

FactorizationCheck stoilow_factor_check(const ComplexField& f,
                                        const SolutionBundle& g) {
    const Grid& gr = g.f.grid;
    if (f.grid.nx != gr.nx || f.grid.ny != gr.ny)
        throw std::invalid_argument("stoilow_factor_check: grid mismatch");
    auto in_region = [&](int i, int j) { return g.f.masked(i, j); };

    // image grid over the mapped region
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < gr.nx; ++i)
        for (int j = 0; j < gr.ny; ++j)
            if (in_region(i, j)) {
                cplx w = g.f.at(i, j);
                xmin = std::min(xmin, w.real());
                xmax = std::max(xmax, w.real());
                ymin = std::min(ymin, w.imag());
                ymax = std::max(ymax, w.imag());
            }
    if (!(xmin < xmax && ymin < ymax))
        throw std::invalid_argument("stoilow_factor_check: empty region");
    int res = std::min(512, std::max(gr.nx, gr.ny));
    Grid ig = make_grid(xmin, xmax, ymin, ymax, res, res);

    std::vector<cplx> h(ig.size(), cplx(0, 0));
    std::vector<std::uint8_t> have(ig.size(), 0);
    auto tri_assign = [&](cplx wa, cplx wb, cplx wc, cplx fa, cplx fb,
                          cplx fc) {
        double x0 = std::min({wa.real(), wb.real(), wc.real()});
        double x1 = std::max({wa.real(), wb.real(), wc.real()});
        double y0 = std::min({wa.imag(), wb.imag(), wc.imag()});
        double y1 = std::max({wa.imag(), wb.imag(), wc.imag()});
        int i0 = std::max(0, int(std::ceil((x0 - ig.xmin) / ig.dx)));
        int i1 = std::min(ig.nx - 1, int(std::floor((x1 - ig.xmin) / ig.dx)));
        int j0 = std::max(0, int(std::ceil((y0 - ig.ymin) / ig.dy)));
        int j1 = std::min(ig.ny - 1, int(std::floor((y1 - ig.ymin) / ig.dy)));
        double det = (wb.real() - wa.real()) * (wc.imag() - wa.imag()) -
                     (wb.imag() - wa.imag()) * (wc.real() - wa.real());
        if (std::abs(det) < 1e-300) return;
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j) {
                std::size_t id = ig.index(i, j);
                if (have[id]) continue;
                cplx p = ig.node(i, j);
                double l1 = ((p.real() - wa.real()) * (wc.imag() - wa.imag()) -
                             (p.imag() - wa.imag()) * (wc.real() - wa.real())) /
                            det;
                double l2 = ((wb.real() - wa.real()) * (p.imag() - wa.imag()) -
                             (wb.imag() - wa.imag()) * (p.real() - wa.real())) /
                            det;
                double l0 = 1.0 - l1 - l2;
                if (l0 < -1e-12 || l1 < -1e-12 || l2 < -1e-12) continue;
                h[id] = l0 * fa + l1 * fb + l2 * fc;
                have[id] = 1;
            }
    };
    for (int i = 0; i + 1 < gr.nx; ++i)
        for (int j = 0; j + 1 < gr.ny; ++j) {
            if (!in_region(i, j) || !in_region(i + 1, j) ||
                !in_region(i, j + 1) || !in_region(i + 1, j + 1))
                continue;
            cplx wa = g.f.at(i, j), wb = g.f.at(i + 1, j),
                 wc = g.f.at(i, j + 1), wd = g.f.at(i + 1, j + 1);
            cplx fa = f.at(i, j), fb = f.at(i + 1, j), fc = f.at(i, j + 1),
                 fd = f.at(i + 1, j + 1);
            tri_assign(wa, wb, wd, fa, fb, fd);
            tri_assign(wa, wd, wc, fa, fd, fc);
        }

    // coverage accounting inside the hull of the mapped nodes
    std::vector<cplx> pts;
    for (int i = 0; i < gr.nx; i += 4)
        for (int j = 0; j < gr.ny; j += 4)
            if (in_region(i, j)) pts.push_back(g.f.at(i, j));
    auto hull = convex_hull(pts);
    auto inside_hull = [&](cplx p) {
        for (std::size_t k = 0; k < hull.size(); ++k) {
            cplx a = hull[k], b = hull[(k + 1) % hull.size()];
            double cr = (b.real() - a.real()) * (p.imag() - a.imag()) -
                        (b.imag() - a.imag()) * (p.real() - a.real());
            if (cr < 0) return false;
        }
        return true;
    };
    long long in_cnt = 0, gap_cnt = 0;
    for (int i = 1; i + 1 < ig.nx; ++i)
        for (int j = 1; j + 1 < ig.ny; ++j) {
            if (!inside_hull(ig.node(i, j))) continue;
            ++in_cnt;
            if (!have[ig.index(i, j)]) ++gap_cnt;
        }

    FactorizationCheck chk;
    chk.gap_fraction = in_cnt ? double(gap_cnt) / in_cnt : 1.0;
    if (chk.gap_fraction > 0.05) {
        chk.inconclusive = true;
        return chk;
    }
    double dbar2 = 0.0, d2 = 0.0;
    for (int i = 1; i + 1 < ig.nx; ++i)
        for (int j = 1; j + 1 < ig.ny; ++j) {
            std::size_t id = ig.index(i, j);
            if (!have[id] || !have[ig.index(i - 1, j)] ||
                !have[ig.index(i + 1, j)] || !have[ig.index(i, j - 1)] ||
                !have[ig.index(i, j + 1)])
                continue;
            cplx hx = (h[ig.index(i + 1, j)] - h[ig.index(i - 1, j)]) /
                      (2 * ig.dx);
            cplx hy = (h[ig.index(i, j + 1)] - h[ig.index(i, j - 1)]) /
                      (2 * ig.dy);
            dbar2 += std::norm(0.5 * (hx + cplx(0, 1) * hy));
            d2 += std::norm(0.5 * (hx - cplx(0, 1) * hy));
        }
    chk.dbar_relative = d2 > 0 ? std::sqrt(dbar2 / d2) : 0.0;
    return chk;
}

}  // namespace qcbel
