#pragma once
// Scalar and complex sample fields on a grid, Beltrami coefficients and
// their dilatation, and circle norms/averages over dashed lines.

#include <functional>
#include <string>

#include "qcbel/geometry.hpp"

namespace qcbel {

struct EllipticityViolation : std::runtime_error {
    int i, j;
    EllipticityViolation(int i_, int j_)
        : std::runtime_error("ellipticity violation: |mu| >= 1 at node (" +
                             std::to_string(i_) + "," + std::to_string(j_) +
                             ")"),
          i(i_), j(j_) {}
};

struct RealField {
    Grid grid;
    std::vector<double> data;
    std::vector<std::uint8_t> mask;  // empty mask means "whole grid"

    RealField() = default;
    explicit RealField(const Grid& g, double fill = 0.0)
        : grid(g), data(g.size(), fill) {}
    double& at(int i, int j) { return data[grid.index(i, j)]; }
    double at(int i, int j) const { return data[grid.index(i, j)]; }
    bool masked(int i, int j) const {
        return mask.empty() || mask[grid.index(i, j)];
    }
    /// Bilinear interpolation of node samples; clamps to the bbox.
    double interp(cplx z) const;
};

struct ComplexField {
    Grid grid;
    std::vector<cplx> data;
    std::vector<std::uint8_t> mask;

    ComplexField() = default;
    explicit ComplexField(const Grid& g, cplx fill = {0, 0})
        : grid(g), data(g.size(), fill) {}
    cplx& at(int i, int j) { return data[grid.index(i, j)]; }
    cplx at(int i, int j) const { return data[grid.index(i, j)]; }
    bool masked(int i, int j) const {
        return mask.empty() || mask[grid.index(i, j)];
    }
    cplx interp(cplx z) const;
};

/// Values of a quantity sampled over radii around a center.
struct RadialProfile {
    cplx center{0, 0};
    std::vector<double> radii;   // strictly increasing, positive
    std::vector<double> values;  // one per radius
};

/// K_mu = (1 + |mu|) / (1 - |mu|) per node; throws EllipticityViolation if
/// |mu| >= 1 at a masked node.
RealField dilatation(const ComplexField& mu);

/// Cap the dilatation at n: wherever K_mu > n, rescale |mu| to (n-1)/(n+1)
/// keeping arg mu.  Idempotent.
ComplexField truncate_mu(const ComplexField& mu, double n);

struct CircleNormResult {
    double value = 0.0;
    bool empty_intersection = false;
    double length = 0.0;  // total arc length of D(z0,r)
    int arc_count = 0;
};

/// Integral of q over the dashed line D(z0,r) against arc length, by
/// trapezoid quadrature of bilinearly interpolated samples.
CircleNormResult circle_norm(const RealField& q, const DomainSpec& spec,
                             cplx z0, double r);
CircleNormResult circle_average(const RealField& q, const DomainSpec& spec,
                                cplx z0, double r);

/// q on D, zero outside.
RealField extend_by_zero(const RealField& q, const DomainSpec& spec);

/// Sum of q over masked nodes times cell area.
double grid_integral(const RealField& q);

// --- built-in coefficient generators -------------------------------------

/// mu == c everywhere on the domain, zero outside.
ComplexField mu_constant(const Grid& g, const DomainSpec& spec, cplx c);

/// Coefficient of the radial stretch z |z|^{k-1}: mu = ((k-1)/(k+1)) z / conj(z).
ComplexField mu_radial_stretch(const Grid& g, const DomainSpec& spec,
                               double k);

/// K(z) = max(1, c * log(1 / |z - z0|)) with radial direction field; the
/// node at z0 itself is capped at the half-spacing value.
ComplexField mu_log_blowup(const Grid& g, const DomainSpec& spec, cplx z0,
                           double c);

/// Real field from a function of position, with the domain mask attached.
RealField real_field(const Grid& g, const DomainSpec& spec,
                     const std::function<double(cplx)>& f);
RealField real_field(const Grid& g, const std::function<double(cplx)>& f);
ComplexField complex_field(const Grid& g,
                           const std::function<cplx(cplx)>& f);

/// Load mu samples from CSV rows "i,j,re_mu,im_mu" onto an existing grid.
ComplexField load_mu_csv(const Grid& g, const DomainSpec& spec,
                         const std::string& path);

}  // namespace qcbel
