#pragma once
// Dirichlet data on a boundary, the disk Schwarz integral, conformal
// straightening of star-shaped images, and the composed construction of
// maps with prescribed dilatation and boundary values of the real part.

#include "qcbel/solver.hpp"

namespace qcbel {

/// Continuous real boundary data, piecewise linear in the parameter
/// t in [0,1) of DomainSpec::boundary_point (t = theta/2pi on the circle).
struct BoundaryData {
    std::vector<double> t;       // strictly increasing in [0,1), closed cycle
    std::vector<double> values;  // one per node

    static BoundaryData from_function(int n,
                                      const std::function<double(double)>& f);
    double eval(double param) const;  // periodic piecewise-linear
};

/// Holomorphic h on the unit disk with Re h = phi on the circle and
/// Im h(0) = 0, by trapezoid quadrature of the circle kernel over N nodes.
/// Requires |z| <= 1 - 2 pi / N and N >= 256.
cplx schwarz_integral(const BoundaryData& phi, cplx z, int N);

/// Sup over n_angles boundary angles of |Re h(r e^{i theta}) - phi| for
/// each radius of the ladder.
std::vector<double> trace_check(const std::function<cplx(cplx)>& h,
                                const BoundaryData& phi,
                                const std::vector<double>& radii,
                                int n_angles = 1024);

struct TheodorsenMap {
    std::vector<double> phi_nodes;  // uniform angles on the disk side
    std::vector<double> theta;      // boundary correspondence angles
    std::function<cplx(cplx)> to_domain;  // disk -> domain, fixes 0
    std::function<cplx(cplx)> to_disk;    // Newton inverse
    int iterations = 0;
    double residual = 0.0;
};

/// Conformal map of the unit disk onto the star-shaped domain with polar
/// boundary radius rho(theta), by the conjugate-function fixed point on
/// 2048 nodes; normalized to fix 0 with positive derivative there.
TheodorsenMap theodorsen_riemann(const std::function<double(double)>& rho,
                                 double tol = 1e-12, int max_iter = 200);

struct DirichletReport {
    bool constant_branch = false;
    cplx constant_value{0, 0};
    SolutionBundle g0;    // global map with the truncated dilatation
    ComplexField f;       // composed solution on the masked grid
    double residual = 0.0;  // against the truncated coefficient, interior
    std::vector<double> trace_radii;
    std::vector<double> trace_errors;
    double jacobian_positive_fraction = 0.0;
    double truncation = 0.0;
    std::function<cplx(cplx)> analytic_part;  // h on the unit disk
    std::function<cplx(cplx)> straightening;  // G : D -> unit disk
    std::function<cplx(cplx)> evaluate;       // f = h(G(z)) anywhere in D
};

/// Composed construction: solve for the global map of the truncated
/// coefficient, straighten its image conformally, transport the boundary
/// data through the boundary correspondence, extend harmonically, compose.
DirichletReport solve_dirichlet(const ComplexField& mu, const DomainSpec& spec,
                                const BoundaryData& phi, double truncation_n,
                                double solver_tol = 1e-12);

struct OscillationProfile {
    RadialProfile profile;  // diameter of the image of D cap B(z0, eps)
    bool truncated = false;  // smallest radii dropped for lack of samples
};

/// Monte Carlo diameter of f(D cap B(z0,eps)) per ladder radius, 1e4
/// seeded samples each, convex-hull diameter.
OscillationProfile boundary_oscillation(const std::function<cplx(cplx)>& f,
                                        const DomainSpec& spec, cplx z0,
                                        const std::vector<double>& eps_ladder,
                                        std::uint64_t seed = 77);

struct FactorizationCheck {
    double dbar_relative = 0.0;  // |dbar h|_2 / |d h|_2 on the image grid
    double gap_fraction = 0.0;   // image nodes without an inverse
    bool inconclusive = false;   // gaps above 5%
};

/// Reconstruct h = f o g^{-1} on an image grid by cell-wise inversion of g
/// and measure how close h is to holomorphic.
FactorizationCheck stoilow_factor_check(const ComplexField& f,
                                        const SolutionBundle& g);

}  // namespace qcbel
