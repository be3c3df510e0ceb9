#pragma once

#include <complex>
#include <vector>

#include "cca/model.hpp"

namespace cca {

// The two bound-state poles of the infinite-array resolvent, in x = ip
// (frequency) convention, with their residue weights and the gap phi.
struct BoundStateSolution {
    double x1 = 0.0;   // above the band, x1 > omega_0 + 2 xi
    double x2 = 0.0;   // below the band, x2 < omega_0 - 2 xi
    double a1 = 0.0;
    double a2 = 0.0;
    double phi = 0.0;  // x1 - x2 > 4 xi
    double residual_upper = 0.0;
    double residual_lower = 0.0;

    double longtime_mean() const { return a1 * a1 + a2 * a2; }
    double longtime_amplitude() const { return 2.0 * a1 * a2; }
};

// First-order-in-J^4 solution around the band edges.
struct PerturbativeSolution {
    double x01 = 0.0;    // omega_0 + 2 xi
    double x02 = 0.0;    // omega_0 - 2 xi
    double c1 = 0.0;     // 1 / (4 xi Omega_+^2)
    double c2 = 0.0;     // -1 / (4 xi Omega_-^2)
    double x1 = 0.0;     // x01 + c1 J^4
    double x2 = 0.0;     // x02 + c2 J^4
    double a1 = 0.0;     // J^4 / (2 Omega_+^3 xi)
    double a2 = 0.0;     // -J^4 / (2 Omega_-^3 xi)
    double phi = 0.0;    // 4 xi + (c1 - c2) J^4
};

// Residuals of the pole equations expressed in x = ip. Both are strictly
// increasing on their domains, so each has at most one simple root.
// Upper: x - Omega - J^2/(xi sqrt(M^2-4)), valid for x > omega_0 + 2 xi.
double pole_function_upper(const ModelParams& params, double x);
// Lower: x - Omega + J^2/(xi sqrt(M^2-4)), valid for x < omega_0 - 2 xi.
double pole_function_lower(const ModelParams& params, double x);

// Bisection in brackets [edge + eps, edge + Lambda] (mirrored below), with
// Lambda = max(10 xi, 2|Omega-omega_0| + 10 xi) and eps = 1e-8 xi, refined
// to 1e-12 xi and polished with one Newton step. The result is gated on the
// implied root error |f/f'| <= 1e-10 xi (the raw residual f is steep near the
// band edges and is reported, not gated). Throws PoleNotFound when a bracket
// shows no sign change (root within eps of the band edge, or J = 0).
BoundStateSolution find_poles(const ModelParams& params);

// Residue weights from the resolvent derivative, evaluated at x1, x2.
std::pair<double, double> residue_weights(const ModelParams& params,
                                          const BoundStateSolution& poles);

// Branch-cut spectral density on x in [-2 xi, 2 xi]. Vanishes at the edges.
double branch_cut_density(const ModelParams& params, double x);

// Integral of C(x) e^{i(x-omega_0)t} over the band. Gauss-Chebyshev nodes
// absorb the edge square root after x = 2 xi cos(theta); the order doubles
// from min_order until two successive orders differ by < tol.
std::complex<double> branch_cut_integral(const ModelParams& params, double t,
                                         double tol = 1e-8, int min_order = 64,
                                         int max_order = 1 << 21);

// alpha(t) = A1 e^{-i x1 t} + A2 e^{-i x2 t} + cut(t)
std::complex<double> alpha_analytic(const ModelParams& params,
                                    const BoundStateSolution& poles, double t);

// Pole terms plus cut over a grid, reusing the converged quadrature order.
std::vector<std::complex<double>> alpha_analytic_series(const ModelParams& params,
                                                        const BoundStateSolution& poles,
                                                        const std::vector<double>& times);

// Long-time law A1^2 + A2^2 + 2 A1 A2 cos(phi t).
double pe_longtime(const BoundStateSolution& poles, double t);

PerturbativeSolution perturbative_solution(const ModelParams& params);

// Closed-form delta Omega^2 = t xi^2 B1 B2 / (J^8 T B3), evaluated verbatim;
// may be negative outside the weak-coupling validity regime.
double perturbative_uncertainty_squared(const ModelParams& params, double t,
                                        double t_total);

// sqrt of the above. Throws DomainError when the squared form is negative
// and a singular-time error when B3 = 0.
double perturbative_uncertainty(const ModelParams& params, double t, double t_total);

} // namespace cca
