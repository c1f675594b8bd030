#include "qcbel/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qcbel/criteria.hpp"
#include "qcbel/dirichlet.hpp"
#include "qcbel/modulus.hpp"
#include "qcbel/solver.hpp"

namespace qcbel {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Deterministically formatted CSV file.
class Csv {
  public:
    Csv(const std::string& dir, const std::string& name,
        const std::string& header)
        : out_(dir + "/" + name) {
        if (!out_) throw std::runtime_error("cannot write " + dir + "/" + name);
        out_ << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

DomainSpec unit_disk() { return DomainSpec::unit_disk(); }

Grid disk_grid(int res, double pad = 1.05) {
    return make_grid(-pad, pad, -pad, pad, res, res);
}

Grid solver_grid(int res) { return make_grid(-4, 4, -4, 4, res, res); }

void run_annulus_modulus(const ScenarioContext& c) {
    double r1 = c.cfg.get_double("params", "r1", 0.25);
    double r2 = c.cfg.get_double("params", "r2", 1.0);
    int curves = c.cfg.get_int("params", "curves", 720);
    double tol = c.cfg.get_double("params", "tol", 1e-3);
    Grid g = make_grid(-r2 * 1.02, r2 * 1.02, -r2 * 1.02, r2 * 1.02,
                       c.resolution, c.resolution);
    auto fam = radial_family({0, 0}, r1, r2, curves, 4 * c.resolution);
    auto res = discrete_modulus(fam, g, tol);
    double expected = 2 * M_PI / std::log(r2 / r1);
    Csv csv(c.outdir, "modulus.csv",
            "value,expected,rel_err,iterations,worst_deficit");
    csv.row({fmt(res.value), fmt(expected),
             fmt((res.value - expected) / expected),
             std::to_string(res.iterations), fmt(res.kkt_residual)});
}

void run_circle_modulus(const ScenarioContext& c) {
    double r1 = c.cfg.get_double("params", "r1", 0.25);
    double r2 = c.cfg.get_double("params", "r2", 1.0);
    int curves = c.cfg.get_int("params", "curves", 256);
    double tol = c.cfg.get_double("params", "tol", 1e-3);
    Grid g = make_grid(-r2 * 1.02, r2 * 1.02, -r2 * 1.02, r2 * 1.02,
                       c.resolution, c.resolution);
    auto fam = circle_family({0, 0}, r1, r2, curves, 4 * c.resolution);
    auto res = discrete_modulus(fam, g, tol);
    double expected = std::log(r2 / r1) / (2 * M_PI);
    Csv csv(c.outdir, "modulus.csv",
            "value,expected,rel_err,iterations,worst_deficit");
    csv.row({fmt(res.value), fmt(expected),
             fmt((res.value - expected) / expected),
             std::to_string(res.iterations), fmt(res.kkt_residual)});
}

void run_ring_bound(const ScenarioContext& c) {
    double r1 = c.cfg.get_double("params", "r1", 0.25);
    double r2 = c.cfg.get_double("params", "r2", 1.0);
    std::string qk = c.cfg.get("params", "weight", "one");
    Grid g = disk_grid(c.resolution);
    RealField q = real_field(g, [&](cplx z) {
        return qk == "quadratic" ? 1.0 + std::norm(z) : 1.0;
    });
    auto rb = ring_bound(q, unit_disk(), {0, 0}, r1, r2);
    Csv summary(c.outdir, "ring_bound.csv", "integral,bound,degenerate");
    summary.row({fmt(rb.integral), fmt(rb.bound),
                 rb.degenerate_radius ? "1" : "0"});
    Csv prof(c.outdir, "eta0.csv", "radius,eta0");
    for (std::size_t k = 0; k < rb.eta0.radii.size(); ++k)
        prof.row({fmt(rb.eta0.radii[k]), fmt(rb.eta0.values[k])});
}

void run_grotzsch(const ScenarioContext& c) {
    double R = c.cfg.get_double("params", "outer", 1.0);
    Csv csv(c.outdir, "grotzsch.csv", "inner,outer,lower_bound");
    for (int k = 1; k <= 8; ++k) {
        double r = R * std::pow(2.0, -k);
        csv.row({fmt(r), fmt(R), fmt(grotzsch_bound(r, R))});
    }
}

void run_weak_flat_disk(const ScenarioContext& c) {
    Grid g = disk_grid(c.resolution);
    std::vector<double> radii;
    for (int k = 0; k <= 4; ++k) radii.push_back(0.32 * std::pow(2.0, -k));
    auto prof = weak_flatness_probe(unit_disk(), g, {1, 0}, radii);
    Csv csv(c.outdir, "weak_flatness.csv", "inner_radius,connection_modulus");
    for (std::size_t k = 0; k < prof.radii.size(); ++k)
        csv.row({fmt(prof.radii[k]), fmt(prof.values[k])});
}

void run_weak_flat_slit(const ScenarioContext& c) {
    DomainSpec sq = DomainSpec::square(1.5);
    Grid g = make_grid(-1.55, 1.55, -1.55, 1.55, c.resolution, c.resolution);
    WeakFlatnessOptions opt;
    opt.outer_radius = 0.4;
    opt.slit = std::make_pair(cplx(0, 0), cplx(1, 0));
    opt.slit_probe_center = {0.5, 0};
    std::vector<double> radii;
    for (int k = 0; k <= 4; ++k) radii.push_back(0.32 * std::pow(2.0, -k));
    auto prof = weak_flatness_probe(sq, g, opt.slit_probe_center, radii, opt);
    Csv csv(c.outdir, "weak_flatness.csv", "inner_radius,connection_modulus");
    for (std::size_t k = 0; k < prof.radii.size(); ++k)
        csv.row({fmt(prof.radii[k]), fmt(prof.values[k])});
}

void run_bmo_estimates(const ScenarioContext& c) {
    Grid g = disk_grid(c.resolution);
    DomainSpec d = unit_disk();
    int discs = c.cfg.get_int("params", "discs", 400);
    Csv csv(c.outdir, "bmo.csv", "field,norm_estimate");
    auto run_one = [&](const char* name, const std::function<double(cplx)>& f) {
        RealField u = real_field(g, d, f);
        csv.row({name, fmt(bmo_norm(u, d, discs, c.seed))});
    };
    run_one("constant", [](cplx) { return 1.0; });
    run_one("re-z", [](cplx z) { return z.real(); });
    double h = g.spacing();
    run_one("log-inverse-abs", [h](cplx z) {
        return std::log(1.0 / std::max(std::abs(z), h / 2));
    });
}

void run_fmo_catalog(const ScenarioContext& c) {
    Grid g = disk_grid(c.resolution);
    double h = g.spacing();
    // six log-spaced radii from 0.4 down, kept clear of the grid scale
    double bot = std::max(0.0125, 4 * h);
    std::vector<double> ladder;
    for (int k = 0; k < 6; ++k)
        ladder.push_back(0.4 * std::pow(bot / 0.4, k / 5.0));
    Csv csv(c.outdir, "fmo.csv", "field,verdict,model,tail_ratio");
    auto run_one = [&](const char* name, const std::function<double(cplx)>& f) {
        RealField u = real_field(g, f);
        auto rep = fmo_probe(u, {0, 0}, ladder);
        csv.row({name, to_string(rep.verdict), rep.model,
                 fmt(rep.params.count("tail_max_over_min")
                         ? rep.params.at("tail_max_over_min")
                         : 0.0)});
    };
    run_one("re-z", [](cplx z) { return z.real(); });
    run_one("log-inverse-abs", [h](cplx z) {
        return std::log(1.0 / std::max(std::abs(z), h / 2));
    });
    run_one("inverse-square", [h](cplx z) {
        double r = std::max(std::abs(z), h / 2);
        return 1.0 / (r * r);
    });
}

void run_phi_divergence(const ScenarioContext& c) {
    Csv csv(c.outdir, "phi_divergence.csv",
            "phi,verdict,model,median_ratio");
    for (const std::string& name : phi_catalog()) {
        PhiFunction p = phi_by_name(name);
        double d0 = std::max(M_E, p.value(p.domain_start + 1.0));
        auto rep = phi_divergence(p, d0);
        csv.row({name, to_string(rep.verdict), rep.model,
                 fmt(rep.params.at("median_ratio"))});
    }
}

void run_phi_equivalence(const ScenarioContext& c) {
    Csv csv(c.outdir, "phi_equivalence.csv",
            "phi,v1,v2,v3,v4,v5,agreement,overall");
    for (const std::string& name : phi_catalog()) {
        auto rep = phi_equivalents(phi_by_name(name));
        std::vector<std::string> cells{name};
        for (Verdict v : rep.components) cells.push_back(to_string(v));
        cells.push_back(rep.agreement ? "1" : "0");
        cells.push_back(to_string(rep.verdict));
        csv.row(cells);
    }
}

void run_radial_divergence(const ScenarioContext& c) {
    Grid g = disk_grid(c.resolution);
    DomainSpec d = unit_disk();
    double h = g.spacing();
    Csv csv(c.outdir, "radial_divergence.csv", "field,verdict,model");
    auto run_one = [&](const char* name, const std::function<double(cplx)>& f) {
        RealField k = real_field(g, f);
        auto rep = radial_divergence(k, d, {0, 0}, 0.5);
        csv.row({name, to_string(rep.verdict), rep.model});
    };
    run_one("one", [](cplx) { return 1.0; });
    run_one("log-blowup", [h](cplx z) {
        return std::max(1.0, std::log(1.0 / std::max(std::abs(z), h / 2)));
    });
    run_one("inverse-r", [h](cplx z) {
        return 1.0 / std::max(std::abs(z), h / 2);
    });
}

void run_beltrami_constant_mu(const ScenarioContext& c) {
    double cval = c.cfg.get_double("params", "c", 0.3);
    double tol = c.cfg.get_double("params", "tol", 1e-12);
    Grid g = solver_grid(c.resolution);
    ComplexField mu = mu_constant(g, unit_disk(), {cval, 0});
    auto b = mrm_solve(mu, tol);
    // piecewise closed form: z + c conj(z) inside, z + c / z outside
    double max_rel = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            cplx z = g.node(i, j);
            if (std::abs(z) > 0.9) continue;
            cplx exact = z + cval * std::conj(z);
            max_rel = std::max(max_rel, std::abs(b.f.at(i, j) - exact) /
                                            std::max(1.0, std::abs(exact)));
        }
    Csv csv(c.outdir, "solver.csv",
            "iterations,fixed_point_residual,equation_residual,max_rel_err_r09");
    csv.row({std::to_string(b.iterations), fmt(b.fixed_point_residual),
             fmt(b.residual), fmt(max_rel)});
}

void run_beurling_disk(const ScenarioContext& c) {
    Grid g = solver_grid(c.resolution);
    ComplexField w = complex_field(g, [](cplx z) {
        return std::abs(z) <= 1.0 ? cplx(1, 0) : cplx(0, 0);
    });
    ComplexField s = beurling_transform(w);
    Csv csv(c.outdir, "beurling.csv", "re_z,im_z,re_value,im_value,expected_re,expected_im,abs_err");
    for (cplx z : {cplx(1.5, 0), cplx(0, 1.7), cplx(1.2, 1.2), cplx(-1.8, 0.4)}) {
        cplx v = s.interp(z);
        cplx e = -1.0 / (z * z);
        csv.row({fmt(z.real()), fmt(z.imag()), fmt(v.real()), fmt(v.imag()),
                 fmt(e.real()), fmt(e.imag()), fmt(std::abs(v - e))});
    }
}

void run_dirichlet_mu0(const ScenarioContext& c) {
    Grid g = solver_grid(c.resolution);
    ComplexField mu = mu_constant(g, unit_disk(), {0, 0});
    auto phi = BoundaryData::from_function(
        2048, [](double t) { return std::cos(2 * M_PI * t); });
    auto rep = solve_dirichlet(mu, unit_disk(), phi, 2.0);
    double max_err = 0.0;
    for (int k = 0; k < 500; ++k) {
        double r = 0.9 * (k % 25) / 24.0, a = 2 * M_PI * k / 500.0;
        cplx z = r * cplx(std::cos(a), std::sin(a));
        max_err = std::max(max_err, std::abs(rep.evaluate(z) - z));
    }
    Csv csv(c.outdir, "dirichlet.csv", "radius,trace_error");
    for (std::size_t k = 0; k < rep.trace_radii.size(); ++k)
        csv.row({fmt(rep.trace_radii[k]), fmt(rep.trace_errors[k])});
    Csv sum(c.outdir, "summary.csv",
            "max_identity_err_r09,residual,jacobian_positive_fraction");
    sum.row({fmt(max_err), fmt(rep.residual),
             fmt(rep.jacobian_positive_fraction)});
}

void run_dirichlet_constant_mu(const ScenarioContext& c) {
    double cval = c.cfg.get_double("params", "c", 0.3);
    Grid g = solver_grid(c.resolution);
    ComplexField mu = mu_constant(g, unit_disk(), {cval, 0});
    auto phi = BoundaryData::from_function(
        2048, [](double t) { return std::cos(2 * M_PI * t); });
    auto rep = solve_dirichlet(mu, unit_disk(), phi, 8.0);
    Csv csv(c.outdir, "dirichlet.csv", "radius,trace_error");
    for (std::size_t k = 0; k < rep.trace_radii.size(); ++k)
        csv.row({fmt(rep.trace_radii[k]), fmt(rep.trace_errors[k])});
    Csv sum(c.outdir, "summary.csv",
            "residual,jacobian_positive_fraction");
    sum.row({fmt(rep.residual), fmt(rep.jacobian_positive_fraction)});
}

void run_boundary_oscillation(const ScenarioContext& c) {
    DomainSpec d = unit_disk();
    std::vector<double> ladder;
    for (int k = 2; k <= 7; ++k) ladder.push_back(std::pow(2.0, -k));
    Csv csv(c.outdir, "oscillation.csv", "map,eps,diameter");
    auto run_one = [&](const char* name, const std::function<cplx(cplx)>& f) {
        auto prof = boundary_oscillation(f, d, {1, 0}, ladder, c.seed);
        for (std::size_t k = 0; k < prof.profile.radii.size(); ++k)
            csv.row({name, fmt(prof.profile.radii[k]),
                     fmt(prof.profile.values[k])});
    };
    run_one("identity", [](cplx z) { return z; });
    run_one("radial-stretch-2", [](cplx z) { return z * std::abs(z); });
}

void run_modulus_inequality(const ScenarioContext& c) {
    DomainSpec d = unit_disk();
    Grid g = disk_grid(c.resolution);
    double eps = c.cfg.get_double("params", "eps", 0.15);
    double eps0 = c.cfg.get_double("params", "eps0", 0.6);
    Csv csv(c.outdir, "inequality.csv",
            "map,lhs,rhs_weighted,rhs_radial,margin_weighted,margin_radial");
    auto run_one = [&](const char* name, const std::function<cplx(cplx)>& fm,
                       const ComplexField& mu) {
        ComplexField f = complex_field(g, fm);
        auto rep = modulus_inequality_check(f, mu, d, {0, 0}, eps, eps0);
        csv.row({name, fmt(rep.lhs), fmt(rep.rhs_weighted),
                 fmt(rep.rhs_radial), fmt(rep.margin_weighted),
                 fmt(rep.margin_radial)});
    };
    run_one("identity", [](cplx z) { return z; },
            mu_constant(g, d, {0, 0}));
    run_one("affine", [](cplx z) { return z + 0.3 * std::conj(z); },
            mu_constant(g, d, {0.3, 0}));
    run_one("radial-stretch-2", [](cplx z) { return z * std::abs(z); },
            mu_radial_stretch(g, d, 2.0));
}

void run_theorem_applicability(const ScenarioContext& c) {
    Grid g = solver_grid(c.resolution);
    DomainSpec d = unit_disk();
    ComplexField mu = mu_radial_stretch(g, d, 2.0);
    std::vector<cplx> pts{{1, 0}, {0, 1}, {-1, 0}};
    auto rep = theorem_applicability(mu, d, pts);
    Csv csv(c.outdir, "applicability.csv",
            "re_point,im_point,fmo,radial,phi,all_hold");
    for (std::size_t k = 0; k < pts.size(); ++k)
        csv.row({fmt(pts[k].real()), fmt(pts[k].imag()),
                 to_string(rep.fmo[k].verdict),
                 to_string(rep.radial[k].verdict),
                 to_string(rep.phi.verdict), rep.all_hold ? "1" : "0"});
}

std::vector<Scenario> build_registry() {
    std::vector<Scenario> reg;
    auto add = [&](std::string name, std::string desc,
                   std::vector<std::string> keys,
                   std::vector<std::string> schema,
                   std::function<void(const ScenarioContext&)> fn) {
        reg.push_back({std::move(name), std::move(desc), std::move(keys),
                       std::move(schema), std::move(fn)});
    };
    add("annulus-modulus",
        "discrete modulus of the radial-segment family in an annulus",
        {"r1", "r2", "curves", "tol"},
        {"modulus.csv: value,expected (2 pi / log(r2/r1)),rel_err,"
         "iterations,worst_deficit"},
        run_annulus_modulus);
    add("circle-modulus",
        "discrete modulus of the concentric-circle family in an annulus",
        {"r1", "r2", "curves", "tol"},
        {"modulus.csv: value,expected (log(r2/r1) / 2 pi),rel_err,"
         "iterations,worst_deficit"},
        run_circle_modulus);
    add("ring-bound",
        "radial lower bound with its extremal radial density",
        {"r1", "r2", "weight"},
        {"ring_bound.csv: integral (dr over circle norm),bound,degenerate",
         "eta0.csv: radius,eta0 (dimension 1/length)"},
        run_ring_bound);
    add("grotzsch", "logarithmic lower bound for ring-crossing families",
        {"outer"}, {"grotzsch.csv: inner,outer,lower_bound"}, run_grotzsch);
    add("weak-flat-disk",
        "boundary crossing-modulus growth at a disk boundary point", {},
        {"weak_flatness.csv: inner_radius,connection_modulus"},
        run_weak_flat_disk);
    add("weak-flat-slit",
        "crossing modulus stays bounded on the edge of a slit", {},
        {"weak_flatness.csv: inner_radius,connection_modulus"},
        run_weak_flat_slit);
    add("bmo-estimates", "mean-oscillation norm estimates on the unit disk",
        {"discs"}, {"bmo.csv: field,norm_estimate"}, run_bmo_estimates);
    add("fmo-catalog", "pointwise mean-oscillation verdicts at the origin",
        {}, {"fmo.csv: field,verdict,model,tail_ratio"}, run_fmo_catalog);
    add("phi-divergence",
        "tail-integral divergence classification for growth functions", {},
        {"phi_divergence.csv: phi,verdict,model,median_ratio"},
        run_phi_divergence);
    add("phi-equivalence",
        "agreement of the five equivalent tail conditions", {},
        {"phi_equivalence.csv: phi,v1..v5,agreement,overall"},
        run_phi_equivalence);
    add("radial-divergence",
        "divergence classification of the radial circle-norm integral", {},
        {"radial_divergence.csv: field,verdict,model"}, run_radial_divergence);
    add("beltrami-constant-mu",
        "spectral solver against the constant-coefficient closed form",
        {"c", "tol"},
        {"solver.csv: iterations,fixed_point_residual,equation_residual,"
         "max_rel_err_r09"},
        run_beltrami_constant_mu);
    add("beurling-disk",
        "spectral transform of the disk indicator against -1/z^2", {},
        {"beurling.csv: re_z,im_z,re_value,im_value,expected_re,expected_im,"
         "abs_err"},
        run_beurling_disk);
    add("dirichlet-disk-mu0-cos",
        "boundary-value pipeline collapse to the identity map", {},
        {"dirichlet.csv: radius,trace_error",
         "summary.csv: max_identity_err_r09,residual,"
         "jacobian_positive_fraction"},
        run_dirichlet_mu0);
    add("dirichlet-constant-mu",
        "boundary-value pipeline with a constant coefficient", {"c"},
        {"dirichlet.csv: radius,trace_error",
         "summary.csv: residual,jacobian_positive_fraction"},
        run_dirichlet_constant_mu);
    add("boundary-oscillation",
        "image diameters of shrinking boundary neighborhoods", {},
        {"oscillation.csv: map,eps,diameter"}, run_boundary_oscillation);
    add("modulus-inequality",
        "image modulus against its two lower bounds for test maps",
        {"eps", "eps0"},
        {"inequality.csv: map,lhs,rhs_weighted,rhs_radial,margin_weighted,"
         "margin_radial"},
        run_modulus_inequality);
    add("theorem-applicability",
        "aggregated hypothesis checks for a bounded-dilatation coefficient",
        {},
        {"applicability.csv: re_point,im_point,fmo,radial,phi,all_hold"},
        run_theorem_applicability);
    return reg;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> reg = build_registry();
    return reg;
}

const Scenario* find_scenario(const std::string& name) {
    for (const Scenario& s : scenario_registry())
        if (s.name == name) return &s;
    return nullptr;
}

std::string list_scenarios(const std::string& filter) {
    std::string out;
    for (const Scenario& s : scenario_registry()) {
        if (!filter.empty() && s.name.find(filter) == std::string::npos)
            continue;
        out += s.name + "  -  " + s.description + "\n";
    }
    return out;
}

void validate_config(const Config& cfg) {
    std::string name = cfg.get("scenario", "name", "");
    if (name.empty())
        throw ConfigError("missing required key [scenario] name");
    const Scenario* sc = find_scenario(name);
    if (!sc) throw ConfigError("unknown scenario: " + name);
    for (const auto& [sec, kv] : cfg.sections) {
        for (const auto& [key, val] : kv) {
            bool ok = false;
            if (sec == "scenario") ok = key == "name";
            else if (sec == "output") ok = key == "dir";
            else if (sec == "run") ok = key == "seed";
            else if (sec == "grid") ok = key == "resolution";
            else if (sec == "params")
                ok = std::find(sc->param_keys.begin(), sc->param_keys.end(),
                               key) != sc->param_keys.end();
            else
                throw ConfigError("unknown section [" + sec + "]");
            if (!ok)
                throw ConfigError("unknown key '" + key + "' in [" + sec +
                                  "] for scenario " + name);
        }
    }
    int res = cfg.get_int("grid", "resolution", 256);
    if (res < 8 || res > 4096)
        throw ConfigError("grid resolution must lie in [8, 4096]");
    // type checks on params
    cfg.get_seed("run", "seed", 2026);
    for (const std::string& key : sc->param_keys)
        if (key != "weight" && cfg.has("params", key))
            cfg.get_double("params", key, 0.0);
}

void run_config(const Config& cfg, const std::string& output_root_override) {
    validate_config(cfg);
    const Scenario* sc = find_scenario(cfg.require("scenario", "name"));
    std::string root = output_root_override.empty()
                           ? cfg.get("output", "dir", "out")
                           : output_root_override;
    ScenarioContext ctx;
    ctx.cfg = cfg;
    ctx.outdir = root + "/" + sc->name;
    ctx.seed = cfg.get_seed("run", "seed", 2026);
    ctx.resolution = cfg.get_int("grid", "resolution", 256);
    std::filesystem::create_directories(ctx.outdir);

    sc->run(ctx);

    {
        std::ofstream schema(ctx.outdir + "/SCHEMA.txt");
        schema << "scenario: " << sc->name << "\n";
        for (const std::string& line : sc->schema_lines)
            schema << line << "\n";
    }
    {
        std::ofstream man(ctx.outdir + "/manifest.txt");
        man << "version: " << kVersion << "\n";
        man << "scenario: " << sc->name << "\n";
        man << "seed: " << ctx.seed << "\n";
        man << "resolution: " << ctx.resolution << "\n";
        auto now = std::chrono::system_clock::to_time_t(
            std::chrono::system_clock::now());
        man << "timestamp: " << now << "\n";  // excluded from comparisons
        man << "config:\n";
        for (const auto& [sec, kv] : cfg.sections)
            for (const auto& [key, val] : kv)
                man << "  [" << sec << "] " << key << " = " << val << "\n";
    }
}

}  // namespace qcbel
