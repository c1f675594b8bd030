#pragma once
// Oscillation and integrability probes: BMO and pointwise mean-oscillation
// estimates, ring integrals with iterated-log normalization, tail-integral
// divergence classification for growth functions, and radial divergence of
// circle norms.  Every verdict here is a numerical classification from a
// finite ladder, never a proof.

#include <cstdint>
#include <map>

#include "qcbel/fields.hpp"

namespace qcbel {

/// A nonnegative, nondecreasing, convex growth function with a generalized
/// inverse.  Shape is verified numerically, not trusted.
struct PhiFunction {
    std::function<double(double)> value;
    std::function<double(double)> inverse;
    // log of value, overflow-safe for exponential growth; falls back to
    // log(value(t)) when unset
    std::function<double(double)> log_value;
    std::string label;
    double domain_start = 0.0;  // monotone and convex from here on
};

/// Built-in catalog: "t", "t^2", "exp", "exp-sqrt", "t-log", "exp-over-t".
PhiFunction phi_by_name(const std::string& name);
std::vector<std::string> phi_catalog();

/// Tabulated growth function with monotone piecewise-linear interpolation.
PhiFunction phi_from_table(const std::vector<double>& t,
                           const std::vector<double>& v,
                           const std::string& label);

/// Checks nondecreasing secants with nondecreasing slopes on a 256-point log
/// grid starting at domain_start; throws invalid_argument on violation.
void verify_phi_shape(const PhiFunction& phi);

enum class Verdict { Holds, Fails, Inconclusive };
const char* to_string(Verdict v);

struct CriterionReport {
    std::string criterion;
    Verdict verdict = Verdict::Inconclusive;
    std::string model;               // fitted growth model label
    std::vector<double> ladder;      // abscissae the evidence was taken at
    std::vector<double> evidence;    // one value per ladder entry
    std::map<std::string, double> params;
    // phi_equivalents only:
    std::vector<Verdict> components;
    bool agreement = true;
};

/// Lower estimate of the mean-oscillation norm: sup over n_discs seeded
/// random discs inside D of the disc mean of |u - disc mean of u|.
double bmo_norm(const RealField& u, const DomainSpec& spec, int n_discs,
                std::uint64_t seed);

/// Mean oscillation of phi at z0 across a shrinking disc ladder.  Evidence
/// is d(eps) = mean over B(z0,eps) of |phi - mean_{B(z0,eps)} phi|; holds if
/// the tail of the ladder is bounded (max/min of last three < 2), fails on a
/// clean power/log growth fit, else inconclusive.
CriterionReport fmo_probe(const RealField& phi, cplx z0,
                          const std::vector<double>& eps_ladder);

/// Ring integral of phi dm / (|z-z0| log(1/|z-z0|))^2 over eps < |z-z0| <
/// eps0, compared against log log(1/eps).  Requires eps0 < e^{-e}.
CriterionReport fmo_loglog_check(const RealField& phi, cplx z0, double eps0,
                                 const std::vector<double>& eps_ladder);

/// Classification of int_{delta0}^inf dtau / (tau * Phi^{-1}(tau)) by decade
/// increments: holds = divergent, fails = convergent.
CriterionReport phi_divergence(const PhiFunction& phi, double delta0);

/// The five equivalent tail conditions built from H = log Phi, each
/// classified by the same decade scheme; agreement flag compares them.
CriterionReport phi_equivalents(const PhiFunction& phi);

/// F(eps) = int_eps^delta dr / ||K||_1(z0,r) on the ladder delta*2^{-k},
/// k=1..12, fitted against bounded / log log / log / power growth.  Holds =
/// divergent (growing model), fails = bounded.
CriterionReport radial_divergence(const RealField& k, const DomainSpec& spec,
                                  cplx z0, double delta);

struct ApplicabilityReport {
    std::vector<cplx> points;
    std::vector<CriterionReport> fmo;     // one per point, on K_mu
    std::vector<CriterionReport> radial;  // one per point
    CriterionReport phi;                  // tail-integral test on Phi(K)
    bool all_hold = false;
};

/// Aggregate check: mean oscillation and radial divergence of K_mu at each
/// sample point plus the growth-function tail test (default Phi(t) = e^t).
ApplicabilityReport theorem_applicability(
    const ComplexField& mu, const DomainSpec& spec,
    const std::vector<cplx>& sample_points,
    const PhiFunction* phi = nullptr);

}  // namespace qcbel
