#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cca/analytic.hpp"
#include "cca/dynamics.hpp"
#include "cca/model.hpp"

namespace cca {

enum class UncertaintySource { numeric, longtime_exact, perturbative };

enum class DerivativeMode {
    automatic,  // central + Richardson, forward exactly at Omega = omega_0
    central,    // central difference + one Richardson refinement
    forward,    // one-sided; probes the quadratic response at symmetric points
};

std::string to_string(UncertaintySource source);
std::string to_string(DerivativeMode mode);

// delta Omega over an encoding-time grid under the total budget t_total.
struct UncertaintyCurve {
    std::vector<double> times;
    std::vector<double> delta_omega;    // positive and finite, same length
    double t_total = 0.0;
    UncertaintySource source = UncertaintySource::numeric;
    std::vector<double> skipped_times;  // singular/degenerate points, excluded
    bool delta_sq_negative = false;     // perturbative source left its regime

    std::size_t size() const { return times.size(); }
};

struct ScalingFit {
    double slope = 0.0;      // of ln(dOmega/xi) against ln(1/(xi t))
    double intercept = 0.0;
    double r = 0.0;
    std::size_t points = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// F = (dpe/dOmega)^2 / (pe (1 - pe)); throws DegeneratePopulation at pe in {0,1}.
double fisher_information(double pe, double dpe_domega);

// Options for the numeric and long-time sources.
struct UncertaintyOptions {
    DerivativeMode mode = DerivativeMode::automatic;
    double central_step = 1e-5;   // units xi
    double forward_step = 1e-3;   // units xi
};

// Per-point evaluation; prefer uncertainty_curve for grids (it reuses the
// shifted-frequency diagonalizations across all times).
double uncertainty_at(const ModelParams& params, double t, double t_total,
                      UncertaintySource source,
                      const UncertaintyOptions& options = {});

UncertaintyCurve uncertainty_curve(const ModelParams& params,
                                   const std::vector<double>& times, double t_total,
                                   UncertaintySource source,
                                   const UncertaintyOptions& options = {});

// OLS of ln(dOmega) on ln(1/t) at the per-period optimal measurement times
// (local minima of delta Omega inside each period bin). With period <= 0 the
// plain local minima of the sampled curve are used.
ScalingFit scaling_fit(const UncertaintyCurve& curve, double window_lo,
                       double window_hi, double period = 0.0);

} // namespace cca
