#include "qcbel/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <random>
#include <unordered_map>

namespace qcbel {

namespace {

void check_guard_band(const ComplexField& w, const char* who) {
    const Grid& g = w.grid;
    double cx = 0.5 * (g.xmin + g.xmax), cy = 0.5 * (g.ymin + g.ymax);
    double hx = 0.25 * (g.xmax - g.xmin), hy = 0.25 * (g.ymax - g.ymin);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if (w.at(i, j) == cplx(0, 0)) continue;
            cplx z = g.node(i, j);
            if (std::abs(z.real() - cx) > hx || std::abs(z.imag() - cy) > hy)
                throw SupportViolation(std::string(who) +
                                       ": support leaves the central half of "
                                       "the bbox");
        }
}

// Periodic FFT machinery over the node lattice (period = n * spacing per
// axis).  Plans are cached per grid shape; FFTW planning is not thread-safe
// so all spectral calls stay on one thread.
struct Spectral {
    int nx, ny;
    double lx, ly;
    fftw_complex* buf;
    fftw_plan fwd, bwd;

    Spectral(const Grid& g)
        : nx(g.nx), ny(g.ny), lx(g.nx * g.dx), ly(g.ny * g.dy) {
        buf = fftw_alloc_complex(std::size_t(nx) * ny);
        fwd = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Spectral() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    double freq_x(int i) const {
        int k = i <= nx / 2 ? i : i - nx;
        return 2 * M_PI * k / lx;
    }
    double freq_y(int j) const {
        int k = j <= ny / 2 ? j : j - ny;
        return 2 * M_PI * k / ly;
    }

    /// out = multiplier(zeta) * in, pointwise in frequency.
    void apply(const std::vector<cplx>& in, std::vector<cplx>& out,
               const std::function<cplx(cplx)>& mult) {
        std::memcpy(buf, in.data(), sizeof(cplx) * in.size());
        fftw_execute(fwd);
        for (int i = 0; i < nx; ++i) {
            double kx = freq_x(i);
            for (int j = 0; j < ny; ++j) {
                cplx zeta(kx, freq_y(j));
                cplx m = mult(zeta);
                cplx v(buf[std::size_t(i) * ny + j][0],
                       buf[std::size_t(i) * ny + j][1]);
                v *= m;
                buf[std::size_t(i) * ny + j][0] = v.real();
                buf[std::size_t(i) * ny + j][1] = v.imag();
            }
        }
        fftw_execute(bwd);
        const double scale = 1.0 / (double(nx) * ny);
        out.resize(in.size());
        for (std::size_t q = 0; q < in.size(); ++q)
            out[q] = cplx(buf[q][0], buf[q][1]) * scale;
    }
};

Spectral& spectral_for(const Grid& g) {
    // cache keyed by shape and spacing; grids in one run are few
    struct Key {
        int nx, ny;
        double dx, dy;
        bool operator==(const Key& o) const {
            return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<int>()(k.nx) ^ (std::hash<int>()(k.ny) << 1) ^
                   std::hash<double>()(k.dx) ^ (std::hash<double>()(k.dy) << 1);
        }
    };
    static std::unordered_map<Key, std::unique_ptr<Spectral>, KeyHash> cache;
    Key key{g.nx, g.ny, g.dx, g.dy};
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Spectral>(g)).first;
    return *it->second;
}

cplx field_mean(const ComplexField& w) {
    cplx s(0, 0);
    for (cplx v : w.data) s += v;
    return s / double(w.data.size());
}

double l2_norm(const std::vector<cplx>& v, double cell_area) {
    double s = 0.0;
    for (cplx x : v) s += std::norm(x);
    return std::sqrt(s * cell_area);
}

}  // namespace

std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& f) {
    const Grid& g = f.grid;
    ComplexField fz(g), fzb(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            cplx fx, fy;
            if (i == 0)
                fx = (f.at(1, j) - f.at(0, j)) / g.dx;
            else if (i == g.nx - 1)
                fx = (f.at(i, j) - f.at(i - 1, j)) / g.dx;
            else
                fx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * g.dx);
            if (j == 0)
                fy = (f.at(i, 1) - f.at(i, 0)) / g.dy;
            else if (j == g.ny - 1)
                fy = (f.at(i, j) - f.at(i, j - 1)) / g.dy;
            else
                fy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * g.dy);
            fz.at(i, j) = 0.5 * (fx - cplx(0, 1) * fy);
            fzb.at(i, j) = 0.5 * (fx + cplx(0, 1) * fy);
        }
    fz.mask = f.mask;
    fzb.mask = f.mask;
    return {std::move(fz), std::move(fzb)};
}

ComplexField beurling_transform(const ComplexField& omega) {
    check_guard_band(omega, "beurling_transform");
    ComplexField out(omega.grid);
    spectral_for(omega.grid)
        .apply(omega.data, out.data, [](cplx zeta) {
            return zeta == cplx(0, 0) ? cplx(0, 0) : std::conj(zeta) / zeta;
        });
    return out;
}

ComplexField cauchy_transform(const ComplexField& omega) {
    check_guard_band(omega, "cauchy_transform");
    const Grid& g = omega.grid;
    cplx m = field_mean(omega);
    std::vector<cplx> centered(omega.data);
    for (cplx& v : centered) v -= m;
    ComplexField out(g);
    spectral_for(g).apply(centered, out.data, [](cplx zeta) {
        // inverse of the d/dzbar symbol (i/2) zeta
        return zeta == cplx(0, 0) ? cplx(0, 0) : cplx(0, -2) / zeta;
    });
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            out.at(i, j) += m * std::conj(g.node(i, j));
    return out;
}

SolutionBundle mrm_solve(const ComplexField& mu, double tol, int max_iter) {
    const Grid& g = mu.grid;
    double sup = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            double a = std::abs(mu.at(i, j));
            if (a >= 1.0) throw EllipticityViolation(i, j);
            sup = std::max(sup, a);
        }
    check_guard_band(mu, "mrm_solve");

    Spectral& sp = spectral_for(g);
    auto beurling = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        sp.apply(in, out, [](cplx zeta) {
            return zeta == cplx(0, 0) ? cplx(0, 0) : std::conj(zeta) / zeta;
        });
    };

    const std::size_t n = g.size();
    std::vector<cplx> omega(n, cplx(0, 0)), s_omega(n), next(n), diff(n);
    const double area = g.cell_area();
    int it = 0;
    bool converged = false;
    for (it = 1; it <= max_iter; ++it) {
        beurling(omega, s_omega);
        for (std::size_t q = 0; q < n; ++q)
            next[q] = mu.data[q] * (1.0 + s_omega[q]);
        for (std::size_t q = 0; q < n; ++q) diff[q] = next[q] - omega[q];
        double update = l2_norm(diff, area);
        omega.swap(next);
        if (update < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergence(max_iter);

    // fixed-point residual of the final iterate
    beurling(omega, s_omega);
    for (std::size_t q = 0; q < n; ++q)
        diff[q] = omega[q] - mu.data[q] * (1.0 + s_omega[q]);
    double fp_res = l2_norm(diff, area);

    ComplexField w(g);
    w.data = omega;
    ComplexField cw = cauchy_transform(w);
    SolutionBundle b;
    b.f = ComplexField(g);
    b.f.mask = mu.mask;
    cplx corner_mean = 0.25 * (cw.at(0, 0) + cw.at(g.nx - 1, 0) +
                               cw.at(0, g.ny - 1) + cw.at(g.nx - 1, g.ny - 1));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            b.f.at(i, j) = g.node(i, j) + cw.at(i, j) - corner_mean;

    auto [fz, fzb] = wirtinger(b.f);
    b.f_z = std::move(fz);
    b.f_zbar = std::move(fzb);
    b.jacobian = RealField(g);
    b.jacobian.mask = mu.mask;
    for (std::size_t q = 0; q < n; ++q)
        b.jacobian.data[q] =
            std::norm(b.f_z.data[q]) - std::norm(b.f_zbar.data[q]);
    b.residual = beltrami_residual(b.f, mu);
    b.fixed_point_residual = fp_res;
    b.iterations = it;
    b.converged = converged;
    b.mu_sup = sup;
    b.tol = tol;
    b.normalization = "corner-mean-zero";
    return b;
}

double beltrami_residual(const ComplexField& f, const ComplexField& mu) {
    if (f.grid.nx != mu.grid.nx || f.grid.ny != mu.grid.ny)
        throw std::invalid_argument("beltrami_residual: grid mismatch");
    auto [fz, fzb] = wirtinger(f);
    double s = 0.0;
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.ny; ++j) {
            if (!mu.masked(i, j) || !f.masked(i, j)) continue;
            // a partially masked f is undefined outside its mask: skip nodes
            // whose difference stencil reaches out of it
            if (!f.mask.empty()) {
                if (i == 0 || i + 1 == f.grid.nx || j == 0 ||
                    j + 1 == f.grid.ny)
                    continue;
                if (!f.masked(i - 1, j) || !f.masked(i + 1, j) ||
                    !f.masked(i, j - 1) || !f.masked(i, j + 1))
                    continue;
            }
            s += std::norm(fzb.at(i, j) - mu.at(i, j) * fz.at(i, j));
        }
    return std::sqrt(s * f.grid.cell_area());
}

HomeoReport homeo_check(const SolutionBundle& bundle, std::uint64_t seed) {
    const Grid& g = bundle.f.grid;
    HomeoReport rep;
    long long masked = 0, positive = 0;
    rep.min_jacobian = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if (!bundle.jacobian.masked(i, j)) continue;
            ++masked;
            double J = bundle.jacobian.at(i, j);
            if (J > 0) ++positive;
            rep.min_jacobian = std::min(rep.min_jacobian, J);
        }
    rep.positive_fraction = masked ? double(positive) / masked : 0.0;

    // seeded cell sampling: orientation of each image quad, plus a spatial
    // hash that flags far-apart source cells landing on the same image spot
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ui(0, g.nx - 2), uj(0, g.ny - 2);
    const long long n_samp = 100000;
    // bucket size from a typical image cell diameter
    double diam_acc = 0.0;
    int diam_cnt = 0;
    for (int t = 0; t < 256; ++t) {
        int i = ui(rng), j = uj(rng);
        if (!bundle.f.masked(i, j) || !bundle.f.masked(i + 1, j + 1)) continue;
        diam_acc += std::abs(bundle.f.at(i + 1, j + 1) - bundle.f.at(i, j));
        ++diam_cnt;
    }
    double bucket = diam_cnt ? std::max(diam_acc / diam_cnt, 1e-12) : 1.0;
    std::unordered_map<long long, std::vector<std::pair<int, int>>> hash;
    auto bucket_of = [&](cplx w) {
        long long bx = (long long)std::floor(w.real() / bucket);
        long long by = (long long)std::floor(w.imag() / bucket);
        return bx * 2000003LL + by;
    };
    for (long long t = 0; t < n_samp; ++t) {
        int i = ui(rng), j = uj(rng);
        if (!bundle.f.masked(i, j) || !bundle.f.masked(i + 1, j) ||
            !bundle.f.masked(i, j + 1) || !bundle.f.masked(i + 1, j + 1))
            continue;
        ++rep.cells_sampled;
        cplx a = bundle.f.at(i, j), b = bundle.f.at(i + 1, j),
             c = bundle.f.at(i, j + 1);
        double cross = (b - a).real() * (c - a).imag() -
                       (b - a).imag() * (c - a).real();
        if (cross < 0) ++rep.orientation_reversals;
        cplx center = 0.25 * (a + b + c + bundle.f.at(i + 1, j + 1));
        long long key = bucket_of(center);
        auto& cell_list = hash[key];
        for (auto [pi, pj] : cell_list)
            if (std::abs(pi - i) + std::abs(pj - j) > 8) {
                ++rep.fold_collisions;
                break;
            }
        if (cell_list.size() < 8) cell_list.emplace_back(i, j);
    }
    rep.consistent = rep.positive_fraction == 1.0 &&
                     rep.orientation_reversals == 0 &&
                     rep.fold_collisions == 0;
    return rep;
}

}  // namespace qcbel
