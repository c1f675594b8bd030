#pragma once
// Spectral construction of quasiconformal maps with prescribed complex
// dilatation, plus residual and topological diagnostics for candidate maps.

#include <cstdint>

#include "qcbel/fields.hpp"

namespace qcbel {

struct SupportViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    int iterations;
    explicit NoConvergence(int it)
        : std::runtime_error("iteration did not converge after " +
                             std::to_string(it) + " steps"),
          iterations(it) {}
};

struct SolutionBundle {
    ComplexField f;         // the map
    ComplexField f_z;       // wirtinger derivatives of f (single code path)
    ComplexField f_zbar;
    RealField jacobian;     // |f_z|^2 - |f_zbar|^2
    double residual = 0.0;  // L2 norm of f_zbar - mu f_z over the mask
    double fixed_point_residual = 0.0;  // L2 norm of omega - mu (1 + S omega)
    int iterations = 0;
    bool converged = false;
    // provenance
    double mu_sup = 0.0;
    double tol = 0.0;
    double truncation = 0.0;  // 0 = untruncated input
    std::string normalization;
};

/// d/dz and d/dzbar by centered differences (one-sided at the bbox edge):
/// f_z = (f_x - i f_y)/2, f_zbar = (f_x + i f_y)/2.
std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& f);

/// Spectral Beurling transform (the d/dz of the Cauchy transform): Fourier
/// multiplier conj(zeta)/zeta, zero at zeta = 0.  The input must be
/// supported in the central half of the bbox; throws SupportViolation
/// otherwise (periodization aliasing guard).
ComplexField beurling_transform(const ComplexField& omega);

/// Inverse d/dzbar with the mean mode handled analytically: the mean m of
/// omega contributes m * conj(z) and the rest goes through the spectral
/// multiplier.  Same support guard as beurling_transform.
ComplexField cauchy_transform(const ComplexField& omega);

/// Construct f with f_zbar = mu f_z by the contracting fixed-point
/// iteration omega <- mu (1 + S omega), f = z + C omega, normalized so the
/// mean of f - z over the four bbox corners vanishes.
SolutionBundle mrm_solve(const ComplexField& mu, double tol = 1e-10,
                         int max_iter = 200);

/// L2 norm over the mask of f_zbar - mu f_z (wirtinger derivatives).
double beltrami_residual(const ComplexField& f, const ComplexField& mu);

struct HomeoReport {
    double positive_fraction = 0.0;  // masked nodes with jacobian > 0
    double min_jacobian = 0.0;
    long long cells_sampled = 0;
    long long orientation_reversals = 0;
    long long fold_collisions = 0;  // far-apart cells landing together
    bool consistent = false;
};

/// Orientation and injectivity sampling over 1e5 seeded random grid cells
/// of the bundle's map.
HomeoReport homeo_check(const SolutionBundle& bundle,
                        std::uint64_t seed = 2026);

}  // namespace qcbel
