#pragma once
// Discrete conformal modulus of curve and dashed-line families, the
// closed-form weighted infimum, radial ring bounds, and boundary probes.

#include "qcbel/fields.hpp"

namespace qcbel {

struct Polyline {
    std::vector<cplx> pts;
    double length() const;
};

enum class FamilyKind { Paths, DashedLines };

struct CurveFamily {
    std::vector<Polyline> curves;
    FamilyKind kind = FamilyKind::Paths;
};

/// Concentric circles of n_curves radii strictly inside (r1, r2) around z0.
CurveFamily circle_family(cplx z0, double r1, double r2, int n_curves,
                          int samples_per_curve);
/// Radial segments joining |z - z0| = r1 to |z - z0| = r2.
CurveFamily radial_family(cplx z0, double r1, double r2, int n_curves,
                          int samples_per_curve);
/// The dashed-line family Sigma_eps: D(z0,r) for n_r radii in (eps, eps0).
CurveFamily dashed_line_family(const DomainSpec& spec, cplx z0, double eps,
                               double eps0, int n_r, int samples);
/// Image of a family under a sampled map (pointwise, re-polylined).
CurveFamily map_family(const CurveFamily& fam, const ComplexField& f);

struct ModulusResult {
    double value = 0.0;
    RealField density;      // optimal rho
    double kkt_residual = 0.0;  // worst admissibility deficit at exit
    int iterations = 0;
    bool converged = false;
};

/// Trapezoid integral of interpolated rho along the curve's arc length.
double line_integral(const RealField& rho, const Polyline& curve);

/// Minimize sum(weight * rho^2) * cellArea subject to a unit line-integral
/// constraint per curve, by cyclic dual coordinate ascent with analytic
/// per-curve steps.  weight == nullptr means weight 1.
ModulusResult discrete_modulus(const CurveFamily& family, const Grid& grid,
                               double tol, const RealField* weight = nullptr,
                               int max_iter = 4000);

struct WeightedMinResult {
    double value = 0.0;
    std::vector<double> alpha;  // extremal density, integrates to 1
};

/// Closed-form infimum of sum(phi * alpha^p * measure) over densities alpha
/// with unit integral: value = [sum phi^{-lambda} dmu]^{-1/lambda},
/// lambda = 1/(p-1), attained at alpha0 proportional to phi^{-lambda}.
WeightedMinResult weighted_min_closed_form(const std::vector<double>& phi,
                                           const std::vector<double>& measure,
                                           double p);

struct RingBoundResult {
    double integral = 0.0;          // I = int dr / ||Q||_1(z0,r)
    RadialProfile eta0;             // extremal radial profile, unit integral
    double bound = 0.0;             // I^{-1}
    bool degenerate_radius = false; // some radius had ||Q||_1 == 0
};

/// Ring bound with the extremal radial density eta0(r) = 1/(I * ||Q||_1).
RingBoundResult ring_bound(const RealField& q, const DomainSpec& spec,
                           cplx z0, double r1, double r2, int n_radii = 512);

/// int_eps^eps0 dr / ||K||_1(z0,r) by midpoint quadrature.
double dashed_line_bound(const RealField& k, const DomainSpec& spec, cplx z0,
                         double eps, double eps0, int n_radii = 512);

/// (2/pi) log(R/r), the modulus lower bound for families crossing all
/// circles S(z0, rho), rho in (r, R).
double grotzsch_bound(double r, double R);

/// Discrete modulus of the family of curves joining node sets E and F in the
/// masked domain, via the Dirichlet-energy formulation (conjugate gradients
/// on the masked five-point Laplacian).
double connection_modulus(const std::vector<std::uint8_t>& mask,
                          const Grid& grid,
                          const std::vector<std::uint8_t>& e_nodes,
                          const std::vector<std::uint8_t>& f_nodes,
                          double cg_tol = 1e-10, int cg_max_iter = 20000);

struct WeakFlatnessOptions {
    double outer_radius = 0.4;   // radius of the fixed neighborhood U
    double hug_offset_cells = 3; // inward offset of the test continua, in
                                 // units of grid spacing
    // Optional zero-width barrier removed from the mask (slit experiments);
    // the continua are then placed parallel to it on opposite sides.
    std::optional<std::pair<cplx, cplx>> slit;
    cplx slit_probe_center{0, 0};  // z0 used when slit is set
};

/// For each inner radius of the ladder, builds worst-case crossing continua
/// near the boundary point z0 and returns the connection modulus.
RadialProfile weak_flatness_probe(const DomainSpec& spec, const Grid& grid,
                                  cplx z0,
                                  const std::vector<double>& inner_radii,
                                  const WeakFlatnessOptions& opt = {});

struct InequalityCheckReport {
    double lhs = 0.0;            // M(f Sigma_eps)
    double rhs_weighted = 0.0;   // inf of int rho^2 / K over the source ring
    double rhs_radial = 0.0;     // int dr / ||K||_1
    double margin_weighted = 0.0;  // (lhs - rhs) / rhs
    double margin_radial = 0.0;
    bool clipped = false;
    bool inconclusive = false;
};

/// Pushes the dashed-line family through a sampled map and checks both
/// modulus lower bounds against it.
InequalityCheckReport modulus_inequality_check(const ComplexField& f,
                                               const ComplexField& mu,
                                               const DomainSpec& spec,
                                               cplx z0, double eps,
                                               double eps0,
                                               double tol = 1e-3);

}  // namespace qcbel
