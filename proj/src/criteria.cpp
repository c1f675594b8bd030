#include "qcbel/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace qcbel {

namespace {

constexpr double kEMinusE = 0.065988035845312537;  // e^{-e}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const std::size_t n = x.size();
    if (n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Classify a sequence of per-decade increments of a nonnegative integrand:
// Holds = the tail integral diverges (increments do not decay geometrically),
// Fails = converges (geometric decay with a finite tail bound).
Verdict classify_decades(const std::vector<double>& inc, std::string& model,
                         std::map<std::string, double>& params) {
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < inc.size(); ++k)
        if (inc[k] > 0) ratios.push_back(inc[k + 1] / inc[k]);
    if (ratios.empty()) {
        model = "null";
        return Verdict::Fails;  // nothing accumulates
    }
    double med = median(ratios);
    double tail_ratio = 0.0;
    for (std::size_t k = ratios.size() >= 3 ? ratios.size() - 3 : 0;
         k < ratios.size(); ++k)
        tail_ratio = std::max(tail_ratio, ratios[k]);
    params["median_ratio"] = med;
    params["tail_ratio"] = tail_ratio;
    if (med >= 0.5) {
        model = "non-geometric";
        return Verdict::Holds;
    }
    if (tail_ratio < 0.5) {
        model = "geometric-decay";
        params["tail_bound"] =
            inc.back() * tail_ratio / std::max(1.0 - tail_ratio, 1e-12);
        return Verdict::Fails;
    }
    model = "mixed";
    return Verdict::Inconclusive;
}

// Simpson quadrature of g over [a, b] with n panels (n even).
double simpson(const std::function<double(double)>& g, double a, double b,
               int n) {
    double h = (b - a) / n, s = g(a) + g(b);
    for (int i = 1; i < n; ++i) s += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double bisect_increasing(const std::function<double(double)>& g, double target,
                         double lo, double hi_seed) {
    // expand hi until g(hi) >= target; +inf when unreachable in double range
    double hi = std::max(hi_seed, lo + 1.0);
    for (int k = 0; k < 1200 && g(hi) < target; ++k) {
        hi *= 2;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int k = 0; k < 200; ++k) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        default: return "inconclusive";
    }
}

PhiFunction phi_by_name(const std::string& name) {
    PhiFunction p;
    p.label = name;
    if (name == "t") {
        p.value = [](double t) { return t; };
        p.inverse = [](double v) { return v; };
        p.log_value = [](double t) { return std::log(t); };
    } else if (name == "t^2") {
        p.value = [](double t) { return t * t; };
        p.inverse = [](double v) { return std::sqrt(v); };
        p.log_value = [](double t) { return 2 * std::log(t); };
    } else if (name == "exp") {
        p.value = [](double t) { return std::exp(t); };
        p.inverse = [](double v) { return std::log(v); };
        p.log_value = [](double t) { return t; };
    } else if (name == "exp-sqrt") {
        p.value = [](double t) { return std::exp(std::sqrt(t)); };
        p.inverse = [](double v) {
            double l = std::log(v);
            return l * l;
        };
        p.log_value = [](double t) { return std::sqrt(t); };
        p.domain_start = 1.0;  // convex from 1 on
    } else if (name == "t-log") {
        p.value = [](double t) { return t * std::log1p(t); };
        p.inverse = [](double v) {
            return bisect_increasing([](double t) { return t * std::log1p(t); },
                                     v, 0.0, 2.0);
        };
        p.log_value = [](double t) {
            return std::log(t) + std::log(std::log1p(t));
        };
    } else if (name == "exp-over-t") {
        p.value = [](double t) { return std::exp(t) / t; };
        p.inverse = [](double v) {
            return bisect_increasing([](double t) { return std::exp(t) / t; },
                                     v, 1.0, 2.0);
        };
        p.log_value = [](double t) { return t - std::log(t); };
        p.domain_start = 1.0;  // decreasing below 1
    } else {
        throw std::invalid_argument("unknown growth function: " + name);
    }
    return p;
}

std::vector<std::string> phi_catalog() {
    return {"t", "t^2", "exp", "exp-sqrt", "t-log", "exp-over-t"};
}

PhiFunction phi_from_table(const std::vector<double>& t,
                           const std::vector<double>& v,
                           const std::string& label) {
    if (t.size() != v.size() || t.size() < 2)
        throw std::invalid_argument("phi_from_table: need >= 2 samples");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]) || !(v[i] <= v[i + 1]))
            throw std::invalid_argument("phi_from_table: non-monotone table");
    auto ts = std::make_shared<std::vector<double>>(t);
    auto vs = std::make_shared<std::vector<double>>(v);
    PhiFunction p;
    p.label = label;
    p.domain_start = t.front();
    p.value = [ts, vs](double x) {
        if (x <= ts->front()) return vs->front();
        if (x >= ts->back()) {
            // linear continuation with the last slope
            std::size_t n = ts->size();
            double s = ((*vs)[n - 1] - (*vs)[n - 2]) /
                       ((*ts)[n - 1] - (*ts)[n - 2]);
            return vs->back() + s * (x - ts->back());
        }
        auto it = std::upper_bound(ts->begin(), ts->end(), x);
        std::size_t i = it - ts->begin();
        double w = (x - (*ts)[i - 1]) / ((*ts)[i] - (*ts)[i - 1]);
        return (1 - w) * (*vs)[i - 1] + w * (*vs)[i];
    };
    auto val = p.value;
    double lo = t.front();
    p.inverse = [val, lo](double y) {
        return bisect_increasing(val, y, lo, lo + 1.0);
    };
    return p;
}

void verify_phi_shape(const PhiFunction& phi) {
    double t_lo = std::max(phi.domain_start, 1e-6);
    double t_hi = t_lo + 1.0;
    while (t_hi < 1e12) {
        double v = phi.value(t_hi * 2);
        if (!std::isfinite(v) || v > 1e290) break;
        t_hi *= 2;
    }
    const int n = 256;
    std::vector<double> ts(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = t_lo * std::pow(t_hi / t_lo, double(i) / (n - 1));
        vs[i] = phi.value(ts[i]);
        if (!std::isfinite(vs[i]) || vs[i] < 0)
            throw std::invalid_argument("growth function not finite nonnegative: " +
                                        phi.label);
    }
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) {
        double slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
        double scale = std::max({std::abs(prev_slope), std::abs(slope), 1.0});
        if (slope < -1e-9 * scale)
            throw std::invalid_argument("growth function not nondecreasing: " +
                                        phi.label);
        if (slope < prev_slope - 1e-9 * scale)
            throw std::invalid_argument("growth function not convex: " +
                                        phi.label);
        prev_slope = slope;
    }
}

double bmo_norm(const RealField& u, const DomainSpec& spec, int n_discs,
                std::uint64_t seed) {
    if (n_discs < 100)
        throw std::invalid_argument("bmo_norm: n_discs must be >= 100");
    const Grid& g = u.grid;
    const double h = g.spacing();
    const double r_lo = 2 * h, r_hi = spec.inradius();
    if (!(r_lo < r_hi))
        throw std::invalid_argument("bmo_norm: grid too coarse for the domain");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(g.xmin, g.xmax),
        uy(g.ymin, g.ymax), u01(0.0, 1.0);
    double sup = 0.0;
    for (int d = 0; d < n_discs; ++d) {
        double r = r_lo * std::pow(r_hi / r_lo, u01(rng));
        cplx c;
        bool placed = false;
        for (int tries = 0; tries < 1000; ++tries) {
            c = {ux(rng), uy(rng)};
            if (spec.contains(c) && spec.boundary_distance(c) >= r) {
                placed = true;
                break;
            }
        }
        if (!placed) continue;
        // disc mean, then mean absolute deviation, over covered grid nodes
        int i0 = std::max(0, int((c.real() - r - g.xmin) / g.dx));
        int i1 = std::min(g.nx - 1, int((c.real() + r - g.xmin) / g.dx) + 1);
        int j0 = std::max(0, int((c.imag() - r - g.ymin) / g.dy));
        int j1 = std::min(g.ny - 1, int((c.imag() + r - g.ymin) / g.dy) + 1);
        double sum = 0.0;
        int cnt = 0;
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                if (u.masked(i, j) && std::abs(g.node(i, j) - c) <= r) {
                    sum += u.at(i, j);
                    ++cnt;
                }
        if (cnt < 4) continue;
        double mean = sum / cnt, dev = 0.0;
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                if (u.masked(i, j) && std::abs(g.node(i, j) - c) <= r)
                    dev += std::abs(u.at(i, j) - mean);
        sup = std::max(sup, dev / cnt);
    }
    return sup;
}

namespace {

// Mean of phi over the disc B(z0, eps) and the mean absolute deviation from
// it, by midpoint polar quadrature of the interpolated field.
std::pair<double, double> disc_mean_dev(const RealField& phi, cplx z0,
                                        double eps) {
    const int n_r = 48, n_t = 96;
    double area = 0.0, sum = 0.0;
    auto sweep = [&](const std::function<double(double)>& f) {
        double acc = 0.0;
        for (int a = 0; a < n_r; ++a) {
            double r = eps * (a + 0.5) / n_r;
            double w = r * (eps / n_r) * (2 * M_PI / n_t);
            for (int b = 0; b < n_t; ++b) {
                double th = 2 * M_PI * (b + 0.5) / n_t;
                acc += w * f(phi.interp(z0 + r * cplx(std::cos(th),
                                                      std::sin(th))));
            }
        }
        return acc;
    };
    area = M_PI * eps * eps;
    sum = sweep([](double v) { return v; });
    double mean = sum / area;
    double dev = sweep([mean](double v) { return std::abs(v - mean); }) / area;
    return {mean, dev};
}

std::vector<double> sorted_descending(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

CriterionReport fmo_probe(const RealField& phi, cplx z0,
                          const std::vector<double>& eps_ladder) {
    if (eps_ladder.size() < 6)
        throw std::invalid_argument("fmo_probe: ladder needs >= 6 radii");
    auto ladder = sorted_descending(eps_ladder);
    const Grid& g = phi.grid;
    double eps_max = ladder.front();
    if (!(ladder.back() > 0))
        throw std::invalid_argument("fmo_probe: radii must be positive");
    // discs comparable to a grid cell make the quadrature meaningless
    if (ladder.back() < 3 * g.spacing())
        throw std::invalid_argument(
            "fmo_probe: smallest radius is below three grid spacings");
    if (z0.real() - eps_max < g.xmin || z0.real() + eps_max > g.xmax ||
        z0.imag() - eps_max < g.ymin || z0.imag() + eps_max > g.ymax)
        throw std::invalid_argument("fmo_probe: ladder leaves the domain");

    CriterionReport rep;
    rep.criterion = "mean-oscillation-at-point";
    rep.ladder = ladder;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        auto [mean, dev] = disc_mean_dev(phi, z0, ladder[k]);
        rep.evidence.push_back(dev);
        rep.params["mean_" + std::to_string(k)] = mean;
    }
    std::size_t n = rep.evidence.size();
    double tail_max = 0, tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = n - 3; k < n; ++k) {
        tail_max = std::max(tail_max, rep.evidence[k]);
        tail_min = std::min(tail_min, rep.evidence[k]);
    }
    rep.params["tail_max_over_min"] =
        tail_min > 0 ? tail_max / tail_min
                     : (tail_max > 0 ? std::numeric_limits<double>::infinity()
                                     : 1.0);
    // oscillation at roundoff level relative to the disc means is bounded no
    // matter what its ratios look like
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        scale = std::max(scale,
                         std::abs(rep.params["mean_" + std::to_string(k)]));
    bool negligible = true;
    for (double d : rep.evidence)
        if (d > 1e-10 * (1.0 + scale)) negligible = false;
    // bounded: the tail either levels off or keeps shrinking
    if (negligible || rep.params["tail_max_over_min"] < 2.0 ||
        rep.evidence[n - 1] <= rep.evidence[n - 3] * 1.1) {
        rep.verdict = Verdict::Holds;
        rep.model = "bounded";
        return rep;
    }
    // monotone blow-up is a failure even when no single growth model fits
    // the noisy quadrature cleanly
    bool monotone = rep.evidence[0] > 0;
    for (std::size_t k = 1; k < n; ++k)
        if (rep.evidence[k] <= rep.evidence[k - 1]) monotone = false;
    if (monotone && rep.evidence[n - 1] > 10 * rep.evidence[0]) {
        rep.verdict = Verdict::Fails;
        rep.model = "growing";
        rep.params["total_growth"] = rep.evidence[n - 1] / rep.evidence[0];
        return rep;
    }
    // growth fit against log(1/eps): power model in log-log, log model linear
    std::vector<double> x, ylog, ylin;
    bool positive = true;
    for (std::size_t k = 0; k < n; ++k) {
        x.push_back(std::log(1.0 / ladder[k]));
        ylin.push_back(rep.evidence[k]);
        if (rep.evidence[k] > 0)
            ylog.push_back(std::log(rep.evidence[k]));
        else
            positive = false;
    }
    LineFit power = positive ? linear_fit(x, ylog) : LineFit{};
    LineFit lin = linear_fit(x, ylin);
    if (positive && power.slope > 0 && power.r2 >= 0.99) {
        rep.verdict = Verdict::Fails;
        rep.model = "power";
        rep.params["exponent"] = power.slope;
        rep.params["r2"] = power.r2;
    } else if (lin.slope > 0 && lin.r2 >= 0.99) {
        rep.verdict = Verdict::Fails;
        rep.model = "log";
        rep.params["slope"] = lin.slope;
        rep.params["r2"] = lin.r2;
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.model = "unfit";
        rep.params["r2"] = std::max(power.r2, lin.r2);
    }
    return rep;
}

CriterionReport fmo_loglog_check(const RealField& phi, cplx z0, double eps0,
                                 const std::vector<double>& eps_ladder) {
    if (!(eps0 < kEMinusE))
        throw std::invalid_argument(
            "fmo_loglog_check: outer radius must stay below e^{-e}");
    if (eps_ladder.size() < 4)
        throw std::invalid_argument("fmo_loglog_check: ladder needs >= 4 radii");
    auto ladder = sorted_descending(eps_ladder);
    if (!(ladder.front() < eps0 && ladder.back() > 0))
        throw std::invalid_argument(
            "fmo_loglog_check: ladder must descend inside (0, eps0)");

    // ring integral in the substitution u = 1/log(1/r): the kernel
    // dm/(r log(1/r))^2 becomes 2 pi * (angular mean) du, so a uniform grid
    // in u integrates the kernel exactly for angularly constant fields
    auto angular_mean = [&](double r) {
        const int n_t = 128;
        double s = 0.0;
        for (int b = 0; b < n_t; ++b) {
            double th = 2 * M_PI * (b + 0.5) / n_t;
            s += phi.interp(z0 + r * cplx(std::cos(th), std::sin(th)));
        }
        return s / n_t;
    };
    auto ring = [&](double eps) {
        double ua = 1.0 / std::log(1.0 / eps), ub = 1.0 / std::log(1.0 / eps0);
        const int n_u = 256;
        double du = (ub - ua) / n_u, s = 0.0;
        for (int a = 0; a < n_u; ++a) {
            double u = ua + (a + 0.5) * du;
            double r = std::exp(-1.0 / u);
            s += angular_mean(r);
        }
        return 2 * M_PI * s * du;
    };

    CriterionReport rep;
    rep.criterion = "ring-integral-loglog";
    rep.ladder = ladder;
    rep.params["eps0"] = eps0;
    std::vector<double> ratios;
    for (double eps : ladder) {
        double A = ring(eps);
        double ll = std::log(std::log(1.0 / eps));
        rep.evidence.push_back(A);
        ratios.push_back(A / ll);
        rep.params["ratio_" + std::to_string(rep.evidence.size() - 1)] = A / ll;
    }
    std::size_t n = ratios.size();
    double tail_max = 0, tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = n - 3; k < n; ++k) {
        tail_max = std::max(tail_max, ratios[k]);
        tail_min = std::min(tail_min, std::max(ratios[k], 0.0));
    }
    if (tail_min >= 0 && (tail_min == 0 ? tail_max == 0
                                        : tail_max / tail_min < 2.0)) {
        rep.verdict = Verdict::Holds;
        rep.model = "bounded-ratio";
        return rep;
    }
    std::vector<double> x, y;
    bool positive = true;
    for (std::size_t k = 0; k < n; ++k) {
        x.push_back(std::log(1.0 / ladder[k]));
        if (ratios[k] > 0) y.push_back(std::log(ratios[k]));
        else positive = false;
    }
    LineFit fit = positive ? linear_fit(x, y) : LineFit{};
    if (positive && fit.slope > 0 && fit.r2 >= 0.99) {
        rep.verdict = Verdict::Fails;
        rep.model = "power";
        rep.params["r2"] = fit.r2;
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.model = "unfit";
    }
    return rep;
}

CriterionReport phi_divergence(const PhiFunction& phi, double delta0) {
    if (!(delta0 > 0) || !std::isfinite(phi.inverse(delta0)) ||
        !(phi.inverse(delta0) >= 0))
        throw std::invalid_argument(
            "phi_divergence: inverse not evaluable at delta0");
    verify_phi_shape(phi);
    CriterionReport rep;
    rep.criterion = "tail-integral-divergence";
    rep.params["delta0"] = delta0;
    // per-decade increments of int dtau / (tau * inverse(tau)), tau from
    // delta0 to delta0 * 10^8, in s = log10(tau / delta0)
    const double ln10 = std::log(10.0);
    for (int k = 1; k <= 8; ++k) {
        double inc = simpson(
            [&](double s) {
                double inv = phi.inverse(delta0 * std::pow(10.0, s));
                if (!(inv > 0)) {
                    if (inv == 0)
                        throw std::invalid_argument(
                            "phi_divergence: inverse vanishes on the tail");
                    throw std::invalid_argument(
                        "phi_divergence: inverse not evaluable");
                }
                return ln10 / inv;
            },
            k - 1.0, double(k), 128);
        rep.evidence.push_back(inc);
        rep.ladder.push_back(delta0 * std::pow(10.0, k));
    }
    rep.verdict = classify_decades(rep.evidence, rep.model, rep.params);
    return rep;
}

CriterionReport phi_equivalents(const PhiFunction& phi) {
    verify_phi_shape(phi);
    auto H = [&](double t) {
        if (phi.log_value) return phi.log_value(t);
        double v = phi.value(t);
        return std::isfinite(v) ? std::log(v)
                                : std::numeric_limits<double>::infinity();
    };
    // tail start where H >= 1
    double base = std::max(phi.domain_start, 1e-9);
    double Delta = std::max(
        base, bisect_increasing([&](double t) { return H(t); }, 1.0, base,
                                base + 1.0));
    if (!std::isfinite(Delta))
        throw std::invalid_argument("phi_equivalents: log growth never reaches 1");
    const double ln10 = std::log(10.0);
    auto Hp = [&](double t) {
        double h = 1e-5 * t;
        return (H(t + h) - H(t - h)) / (2 * h);
    };
    auto Hinv = [&](double eta) {
        return bisect_increasing([&](double t) { return H(t); }, eta, base,
                                 Delta * 2);
    };
    double DeltaStar = H(Delta);

    std::vector<std::vector<double>> inc(5);
    for (int k = 1; k <= 8; ++k) {
        double a = k - 1.0, b = double(k);
        // 1: int H'(t) dt / t
        inc[0].push_back(simpson(
            [&](double s) {
                double t = Delta * std::pow(10.0, s);
                return Hp(t) * ln10;
            },
            a, b, 256));
        // 2: int dH / t as a Stieltjes sum on a fine log grid
        {
            const int n = 256;
            double s = 0.0;
            for (int q = 0; q < n; ++q) {
                double t0 = Delta * std::pow(10.0, a + (b - a) * q / n);
                double t1 = Delta * std::pow(10.0, a + (b - a) * (q + 1) / n);
                s += (H(t1) - H(t0)) * 2.0 / (t0 + t1);
            }
            inc[1].push_back(s);
        }
        // 3: int H(t) dt / t^2
        inc[2].push_back(simpson(
            [&](double s) {
                double t = Delta * std::pow(10.0, s);
                return H(t) / t * ln10;
            },
            a, b, 256));
        // 4: int_0^delta H(1/t) dt over the decade [delta 10^-k, delta 10^-k+1]
        {
            double delta = 1.0 / Delta;
            inc[3].push_back(simpson(
                [&](double s) {
                    double t = delta * std::pow(10.0, -s);
                    return H(1.0 / t) * t * ln10;  // dt = -t ln10 ds
                },
                a, b, 256));
        }
        // 5: int d eta / Hinv(eta)
        inc[4].push_back(simpson(
            [&](double s) {
                double eta = DeltaStar * std::pow(10.0, s);
                double t = Hinv(eta);
                return std::isfinite(t) ? eta * ln10 / t : 0.0;
            },
            a, b, 128));
    }

    CriterionReport rep;
    rep.criterion = "equivalent-tail-conditions";
    rep.params["tail_start"] = Delta;
    std::string models;
    for (int q = 0; q < 5; ++q) {
        std::string m;
        std::map<std::string, double> p;
        Verdict v = classify_decades(inc[q], m, p);
        rep.components.push_back(v);
        rep.params["median_ratio_" + std::to_string(q)] = p["median_ratio"];
        models += (q ? "," : "") + m;
        rep.evidence.push_back(inc[q].back());
    }
    rep.model = models;
    rep.agreement = true;
    for (Verdict v : rep.components)
        if (v != rep.components.front()) rep.agreement = false;
    rep.verdict = rep.agreement ? rep.components.front() : Verdict::Inconclusive;
    return rep;
}

CriterionReport radial_divergence(const RealField& k, const DomainSpec& spec,
                                  cplx z0, double delta) {
    double dmax = spec.max_distance(z0);
    if (!(delta > 0 && delta < dmax))
        throw std::invalid_argument(
            "radial_divergence: delta must lie in (0, max distance)");
    const int n_steps = 12, per_step = 8;
    const int n_iv = n_steps * per_step;
    // log-spaced radii from delta*2^-12 up to delta; F accumulated per
    // interval by midpoint circle norms
    std::vector<double> edges(n_iv + 1);
    for (int q = 0; q <= n_iv; ++q)
        edges[q] = delta * std::pow(2.0, -double(n_iv - q) / per_step);
    std::vector<double> part(n_iv, 0.0);
    int nonempty = 0;
    bool degenerate = false;
    for (int q = 0; q < n_iv; ++q) {
        double r = std::sqrt(edges[q] * edges[q + 1]);  // log midpoint
        auto cn = circle_norm(k, spec, z0, r);
        if (cn.empty_intersection || cn.value <= 0) {
            degenerate = true;
            continue;
        }
        ++nonempty;
        part[q] = (edges[q + 1] - edges[q]) / cn.value;
    }
    if (nonempty == 0)
        throw std::invalid_argument(
            "radial_divergence: every circle misses the domain");

    CriterionReport rep;
    rep.criterion = "radial-norm-divergence";
    rep.params["delta"] = delta;
    if (degenerate) {
        // a positive numerator over a vanishing circle norm: the integral is
        // infinite by convention
        rep.verdict = Verdict::Holds;
        rep.model = "degenerate";
        return rep;
    }
    std::vector<double> F(n_steps);  // F(eps_k), eps_k = delta * 2^-k
    for (int s = 1; s <= n_steps; ++s) {
        double acc = 0.0;
        for (int q = (n_steps - s) * per_step; q < n_iv; ++q) acc += part[q];
        F[s - 1] = acc;
        rep.ladder.push_back(delta * std::pow(2.0, -s));
        rep.evidence.push_back(acc);
    }
    // bounded when the last refinements stop adding mass
    double tail_growth = (F[n_steps - 1] - F[n_steps - 3]) /
                         std::max(F[n_steps - 1], 1e-300);
    rep.params["tail_growth"] = tail_growth;
    if (tail_growth < 0.02) {
        rep.verdict = Verdict::Fails;
        rep.model = "bounded";
        rep.params["limit"] = F[n_steps - 1];
        return rep;
    }
    // growth models against log(1/eps)
    std::vector<double> xlog, xll, xpow, y, ylog;
    bool pos = true;
    for (int s = 0; s < n_steps; ++s) {
        double L = std::log(1.0 / rep.ladder[s]);
        xlog.push_back(L);
        xll.push_back(std::log(L));
        y.push_back(F[s]);
        if (F[s] > 0) ylog.push_back(std::log(F[s]));
        else pos = false;
    }
    LineFit f_log = linear_fit(xlog, y);
    LineFit f_ll = linear_fit(xll, y);
    LineFit f_pow = pos ? linear_fit(xlog, ylog) : LineFit{};
    double best_r2 = std::max({f_log.r2, f_ll.r2, pos ? f_pow.r2 : 0.0});
    rep.params["r2"] = best_r2;
    if (best_r2 < 0.99) {
        rep.verdict = Verdict::Inconclusive;
        rep.model = "unfit";
        return rep;
    }
    if (f_log.r2 == best_r2) {
        rep.model = "log";
        rep.params["slope"] = f_log.slope;
        rep.verdict = f_log.slope > 0 ? Verdict::Holds : Verdict::Fails;
    } else if (f_ll.r2 == best_r2) {
        rep.model = "loglog";
        rep.params["slope"] = f_ll.slope;
        rep.verdict = f_ll.slope > 0 ? Verdict::Holds : Verdict::Fails;
    } else {
        rep.model = "power";
        rep.params["exponent"] = f_pow.slope;
        rep.verdict = f_pow.slope > 0 ? Verdict::Holds : Verdict::Fails;
    }
    return rep;
}

ApplicabilityReport theorem_applicability(const ComplexField& mu,
                                          const DomainSpec& spec,
                                          const std::vector<cplx>& sample_points,
                                          const PhiFunction* phi) {
    ApplicabilityReport rep;
    rep.points = sample_points;
    RealField K = dilatation(mu);
    // fill unmasked nodes with the trivial dilatation so interpolation near
    // the boundary sees the extension by 1
    if (!K.mask.empty())
        for (std::size_t i = 0; i < K.data.size(); ++i)
            if (!K.mask[i]) K.data[i] = 1.0;

    const Grid& g = mu.grid;
    double room = 0.25 * std::min(g.xmax - g.xmin, g.ymax - g.ymin);
    bool all = true;
    for (cplx z0 : sample_points) {
        // six log-spaced radii, kept clear of the grid scale
        double top = 0.5 * room;
        double bot = std::max(room / 64.0, 4 * g.spacing());
        std::vector<double> ladder;
        for (int s = 0; s < 6; ++s)
            ladder.push_back(top * std::pow(bot / top, s / 5.0));
        auto f = fmo_probe(K, z0, ladder);
        all = all && f.verdict == Verdict::Holds;
        rep.fmo.push_back(std::move(f));
        auto r = radial_divergence(K, spec, z0, 0.5 * spec.max_distance(z0));
        all = all && r.verdict == Verdict::Holds;
        rep.radial.push_back(std::move(r));
    }
    PhiFunction def = phi ? *phi : phi_by_name("exp");
    rep.phi = phi_divergence(def, std::max(M_E, def.value(def.domain_start + 1.0)));
    all = all && rep.phi.verdict == Verdict::Holds;
    // finiteness of the area integral of Phi(K) over the domain
    RealField phiK = K;
    for (auto& v : phiK.data) v = def.value(v);
    rep.phi.params["area_integral"] = grid_integral(phiK);
    all = all && std::isfinite(rep.phi.params["area_integral"]);
    rep.all_hold = all;
    return rep;
}

}  // namespace qcbel
